"""
Empirical one-dimensional optimal transport.

An empirical measure on the line is held as its sorted samples. The CDF uses
midpoint plotting positions p_i = (i - 0.5) / m at the i-th order statistic and
linear interpolation between neighbours; it is 0 below the smallest sample and
1 above the largest. The inverse CDF interpolates the same nodes and clamps to
the extreme order statistics, so the monotone transport map between two
measures is inverse_cdf(target, cdf(source, z)).
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from utils.exceptions import InvalidArgumentError

ArrayOrFloat = Union[float, np.ndarray]


def plotting_positions(m: int) -> np.ndarray:
    """
    Midpoint plotting positions (i - 0.5) / m for i = 1..m
    """
    return (np.arange(m, dtype=np.float64) + 0.5) / m


@dataclass(frozen=True, eq=False)
class QuantileTable:
    """
    Sorted samples of an empirical distribution on the line
    """

    sorted_samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.sorted_samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size < 1:
            raise InvalidArgumentError("a quantile table needs at least one sample")
        if np.any(np.diff(samples) < 0):
            raise InvalidArgumentError("quantile table samples must be non-decreasing")
        samples.setflags(write=False)
        object.__setattr__(self, "sorted_samples", samples)

        # Ties collapse to one CDF node placed at the midpoint of their positions
        values, first, counts = np.unique(samples, return_index=True, return_counts=True)
        positions = plotting_positions(samples.size)
        node_levels = 0.5 * (positions[first] + positions[first + counts - 1])
        object.__setattr__(self, "_cdf_nodes", values)
        object.__setattr__(self, "_cdf_levels", node_levels)
        object.__setattr__(self, "_positions", positions)

    @property
    def m(self) -> int:
        return self.sorted_samples.size

    @property
    def minimum(self) -> float:
        return float(self.sorted_samples[0])

    @property
    def maximum(self) -> float:
        return float(self.sorted_samples[-1])

    def __repr__(self):
        return f"<QuantileTable(m={self.m}, min={self.minimum:.6g}, max={self.maximum:.6g})>"


def build_quantile_table(samples) -> QuantileTable:
    """
    Stable-sorted copy of the samples
    """
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size == 0:
        raise InvalidArgumentError("cannot build a quantile table from an empty sample")
    if not np.all(np.isfinite(samples)):
        raise InvalidArgumentError("quantile table samples must be finite")
    return QuantileTable(np.sort(samples, kind="stable"))


def cdf(table: QuantileTable, z: ArrayOrFloat) -> ArrayOrFloat:
    """
    Interpolated empirical CDF evaluated at z (scalar or array)
    """
    z_arr = np.asarray(z, dtype=np.float64)
    values = np.interp(z_arr, table._cdf_nodes, table._cdf_levels)
    values = np.where(z_arr < table.minimum, 0.0, values)
    values = np.where(z_arr > table.maximum, 1.0, values)
    return values if np.ndim(z) else float(values)


def inverse_cdf(table: QuantileTable, u: ArrayOrFloat) -> ArrayOrFloat:
    """
    Generalized inverse of `cdf` under the same plotting-position convention
    """
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(~((u_arr >= 0.0) & (u_arr <= 1.0))):
        raise InvalidArgumentError("inverse_cdf levels must lie in [0, 1]")
    # np.interp clamps to the first/last node outside [0.5/m, 1 - 0.5/m]
    values = np.interp(u_arr, table._positions, table.sorted_samples)
    return values if np.ndim(u) else float(values)


def potential_derivative(z: ArrayOrFloat, source: QuantileTable, target: QuantileTable) -> ArrayOrFloat:
    """
    Derivative of the Kantorovich potential, z - F_target^{-1}(F_source(z)).

    z minus this value is the monotone transport map from source to target.
    """
    matched = inverse_cdf(target, cdf(source, z))
    if np.ndim(z):
        return np.asarray(z, dtype=np.float64) - matched
    return float(z) - matched


def quantile_coupling_cost(a: QuantileTable, b: QuantileTable) -> float:
    """
    Squared 2-Wasserstein distance between two empirical measures on the line,
    using the quantile coupling at min(m_a, m_b) evenly spaced levels.

    With equal sizes the levels are the plotting positions themselves, so the
    coupling pairs order statistics exactly.
    """
    levels = plotting_positions(min(a.m, b.m))
    qa = a.sorted_samples if a.m == levels.size else inverse_cdf(a, levels)
    qb = b.sorted_samples if b.m == levels.size else inverse_cdf(b, levels)
    return float(np.mean((qa - qb) ** 2))
