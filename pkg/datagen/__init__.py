from .mixture import (
    GaussianMixture,
    level_set_grid,
    level_set_threshold,
    sample_mixture,
    toy_ring_mixture,
)
from .dataset import Dataset, load_dataset, normalize_rows, save_dataset

__all__ = [
    "GaussianMixture",
    "level_set_grid",
    "level_set_threshold",
    "sample_mixture",
    "toy_ring_mixture",
    "Dataset",
    "load_dataset",
    "normalize_rows",
    "save_dataset",
]
