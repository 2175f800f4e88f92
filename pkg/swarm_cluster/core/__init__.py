"""Datasets, partitions and the distance metrics shared by every algorithm."""

from .dataset import (
    Dataset,
    distance,
    load_builtin,
    load_csv,
    make_synthetic,
    normalize_minmax,
    pairwise_distances,
)
from .partition import (
    NOISE,
    Centroids,
    ContingencyTable,
    Partition,
    assign_nearest,
    compute_centroids,
    contingency,
    read_partition_csv,
    repair_empty_clusters,
)

__all__ = [
    "Dataset",
    "load_csv",
    "load_builtin",
    "make_synthetic",
    "normalize_minmax",
    "distance",
    "pairwise_distances",
    "NOISE",
    "Partition",
    "Centroids",
    "ContingencyTable",
    "assign_nearest",
    "compute_centroids",
    "contingency",
    "read_partition_csv",
    "repair_empty_clusters",
]
