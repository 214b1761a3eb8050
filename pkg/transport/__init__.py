from .ot1d import (
    QuantileTable,
    build_quantile_table,
    cdf,
    inverse_cdf,
    potential_derivative,
    plotting_positions,
    quantile_coupling_cost,
)

__all__ = [
    "QuantileTable",
    "build_quantile_table",
    "cdf",
    "inverse_cdf",
    "potential_derivative",
    "plotting_positions",
    "quantile_coupling_cost",
]
