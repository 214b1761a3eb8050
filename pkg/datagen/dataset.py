"""
Dataset ingestion, normalization and serialization.

Datasets are UTF-8 CSV files with one sample per row, comma-separated decimal
floats and no header. Values are written with 17 significant digits so a
save/load round trip is exact.
"""

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
import structlog

from utils.exceptions import DatasetParseError, InvalidArgumentError

logger = structlog.get_logger(__name__)

UNIT_NORM_TOLERANCE = 1e-9
ZERO_ROW_NORM = 1e-12

PathLike = Union[str, Path]


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    n x d sample matrix; `normalized` promises unit-norm rows
    """

    rows: np.ndarray
    normalized: bool = False
    source: Optional[str] = None

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise InvalidArgumentError(f"dataset rows must form an n x d matrix, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise InvalidArgumentError("dataset contains non-finite values")
        if self.normalized:
            norms = np.linalg.norm(rows, axis=1)
            bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_NORM_TOLERANCE)
            if bad.size:
                raise InvalidArgumentError(f"row {bad[0]} has norm {norms[bad[0]]:.12g} in a normalized dataset")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def fingerprint(self) -> str:
        """
        SHA-256 over the shape and the little-endian float64 bytes of the rows
        """
        digest = hashlib.sha256()
        digest.update(f"{self.n}x{self.dim}".encode())
        digest.update(np.ascontiguousarray(self.rows, dtype="<f8").tobytes())
        return digest.hexdigest()

    def __repr__(self):
        return f"<Dataset(n={self.n}, dim={self.dim}, normalized={self.normalized}, source={self.source!r})>"


def normalize_rows(rows) -> Dataset:
    """
    Divide each row by its Euclidean norm
    """
    source = getattr(rows, "source", None)
    rows = np.asarray(getattr(rows, "rows", rows), dtype=np.float64)
    if rows.ndim != 2:
        raise InvalidArgumentError(f"rows must be an n x d matrix, got shape {rows.shape}")
    norms = np.linalg.norm(rows, axis=1)
    zero = np.flatnonzero(norms < ZERO_ROW_NORM)
    if zero.size:
        raise InvalidArgumentError(f"row {zero[0]} has (near) zero norm and cannot be normalized")
    return Dataset(rows / norms[:, None], normalized=True, source=source)


def _parser_line(error: Exception) -> Optional[int]:
    match = re.search(r"line (\d+)", str(error))
    return int(match.group(1)) if match else None


def _to_float_matrix(frame: pd.DataFrame) -> np.ndarray:
    cells = frame.to_numpy()
    try:
        return cells.astype(np.float64)
    except (TypeError, ValueError):
        for i, row in enumerate(cells):
            for j, cell in enumerate(row):
                try:
                    float(cell)
                except (TypeError, ValueError):
                    raise DatasetParseError(f"column {j + 1}: cannot parse {cell!r} as a number", line=i + 1)
        raise


def load_dataset(path: PathLike, expect_dim: Optional[int] = None) -> Dataset:
    """
    Parse a headerless CSV of floats; rows of unit norm yield a normalized dataset
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetParseError(f"dataset file not found: {path}")

    try:
        frame = pd.read_csv(
            path,
            header=None,
            dtype=str,
            skip_blank_lines=False,
            keep_default_na=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DatasetParseError(f"dataset file is empty: {path}", line=1)
    except pd.errors.ParserError as e:
        raise DatasetParseError(f"inconsistent row width ({e})", line=_parser_line(e)) from e

    # Trailing blank lines are tolerated, interior ones are not
    blank = frame.isna().all(axis=1) | (frame == "").all(axis=1)
    while len(frame) and blank.iloc[-1]:
        frame, blank = frame.iloc[:-1], blank.iloc[:-1]
    if len(frame) == 0:
        raise DatasetParseError(f"dataset file has no rows: {path}", line=1)
    if blank.any():
        raise DatasetParseError("blank row", line=int(np.flatnonzero(blank.to_numpy())[0]) + 1)

    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        raise DatasetParseError(
            f"row has fewer than {frame.shape[1]} fields", line=int(np.flatnonzero(short)[0]) + 1
        )

    rows = _to_float_matrix(frame)
    finite = np.isfinite(rows).all(axis=1)
    if not finite.all():
        raise DatasetParseError("non-finite value", line=int(np.flatnonzero(~finite)[0]) + 1)

    if expect_dim is not None and rows.shape[1] != expect_dim:
        raise InvalidArgumentError(f"dataset {path} has dimension {rows.shape[1]}, expected {expect_dim}")

    norms = np.linalg.norm(rows, axis=1)
    normalized = bool(np.all(np.abs(norms - 1.0) <= UNIT_NORM_TOLERANCE))
    dataset = Dataset(rows, normalized=normalized, source=str(path))
    logger.info("dataset_loaded", path=str(path), n=dataset.n, dim=dataset.dim, normalized=normalized)
    return dataset


def save_dataset(rows, path: PathLike) -> Path:
    """
    Write rows (matrix, Dataset or ParticleCloud) as a headerless CSV
    """
    rows = np.asarray(getattr(rows, "rows", getattr(rows, "positions", rows)), dtype=np.float64)
    if rows.ndim != 2:
        raise InvalidArgumentError(f"rows must be an n x d matrix, got shape {rows.shape}")
    path = Path(path)
    pd.DataFrame(rows).to_csv(
        path, header=False, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8"
    )
    return path
