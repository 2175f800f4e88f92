"""Clustering results: assignments, centroids and contingency tables."""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..config.models import Metric
from ..errors import PartitionError
from .dataset import Dataset, pairwise_distances

logger = logging.getLogger(__name__)

NOISE = -1


@dataclass(frozen=True, eq=False)
class Partition:
    """Per-object cluster ids in [0, k), or NOISE.

    A Partition produced by ``assign_nearest`` may hold empty clusters; they
    are listed in ``empty_clusters`` instead of raising.
    """

    assignment: np.ndarray
    k: int
    empty_clusters: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        labels = np.array(self.assignment, dtype=np.int64, copy=True).reshape(-1)
        if self.k < 0:
            raise PartitionError(f"k must be non-negative, got {self.k}")
        bad = (labels != NOISE) & ((labels < 0) | (labels >= self.k))
        if bad.any():
            raise PartitionError(f"cluster id {int(labels[bad][0])} outside [0, {self.k})")
        labels.setflags(write=False)
        object.__setattr__(self, "assignment", labels)
        sizes = np.bincount(labels[labels != NOISE], minlength=self.k)
        object.__setattr__(self, "empty_clusters", tuple(int(i) for i in np.flatnonzero(sizes == 0)))

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Build a Partition from arbitrary labels; -1 stays NOISE, the rest map to 0..k-1 in sorted order."""
        raw = np.asarray(labels).reshape(-1)
        noise = np.zeros(raw.shape[0], dtype=bool)
        if raw.dtype.kind in "iuf":
            noise = raw == NOISE
        elif raw.dtype.kind in "OU":
            noise = np.array([str(v).strip() == str(NOISE) for v in raw], dtype=bool)
        assignment = np.full(raw.shape[0], NOISE, dtype=np.int64)
        if (~noise).any():
            values = raw[~noise]
            if raw.dtype.kind in "OU":
                values = values.astype(str)
            _, codes = np.unique(values, return_inverse=True)
            assignment[~noise] = codes.reshape(-1)
            k = int(codes.max()) + 1
        else:
            k = 0
        return cls(assignment=assignment, k=k)

    @property
    def n_objects(self) -> int:
        return int(self.assignment.shape[0])

    @property
    def noise_mask(self) -> np.ndarray:
        return self.assignment == NOISE

    @property
    def noise_count(self) -> int:
        return int(self.noise_mask.sum())

    @property
    def has_noise(self) -> bool:
        return bool(self.noise_mask.any())

    @property
    def is_complete(self) -> bool:
        """No noise and no empty cluster."""
        return not self.has_noise and not self.empty_clusters

    def sizes(self) -> np.ndarray:
        """Member count of each cluster id."""
        return np.bincount(self.assignment[~self.noise_mask], minlength=self.k)

    def members(self, cluster: int) -> np.ndarray:
        """Object indices assigned to ``cluster``."""
        return np.flatnonzero(self.assignment == cluster)

    def without_noise(self) -> Tuple["Partition", np.ndarray]:
        """Partition restricted to non-noise objects, and the kept-object mask."""
        keep = ~self.noise_mask
        return Partition(assignment=self.assignment[keep], k=self.k), keep

    def require_complete(self) -> "Partition":
        """Raise unless every object is labeled and every cluster non-empty."""
        if self.has_noise:
            raise PartitionError(f"partition contains {self.noise_count} noise objects")
        if self.empty_clusters:
            raise PartitionError(f"empty clusters: {list(self.empty_clusters)}")
        return self

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the single-column label file (noise = -1, no header)."""
        path = Path(path)
        pd.DataFrame({"label": self.assignment}).to_csv(path, index=False, header=False)
        return path


def read_partition_csv(path: Union[str, Path]) -> Partition:
    """Read a single-column label file written by ``Partition.to_csv``."""
    path = Path(path)
    if not path.is_file():
        raise PartitionError(f"cannot read label file '{path}'")
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise PartitionError(f"label file '{path}' is empty")
    except pd.errors.ParserError as e:
        raise PartitionError(f"label file '{path}' must have a single column: {e}")
    if frame.shape[1] != 1:
        raise PartitionError(f"label file '{path}' must have a single column, found {frame.shape[1]}")
    raw = frame.iloc[:, 0].str.strip()
    numeric = pd.to_numeric(raw, errors="coerce")
    if numeric.notna().all() and (numeric == numeric.round()).all():
        # integer ids keep numeric order ("10" must sort after "2")
        return Partition.from_labels(numeric.to_numpy(dtype=np.int64))
    return Partition.from_labels(raw.to_numpy(dtype=object))


@dataclass(frozen=True, eq=False)
class Centroids:
    """k x n_features matrix of cluster centres."""

    centers: np.ndarray

    def __post_init__(self):
        centers = np.array(self.centers, dtype=np.float64, copy=True)
        if centers.ndim == 1:
            centers = centers.reshape(-1, 1)
        if centers.ndim != 2 or centers.shape[0] < 1:
            raise PartitionError("centroids need at least one centre")
        if not np.all(np.isfinite(centers)):
            raise PartitionError("centroids contain non-finite values")
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)

    @property
    def k(self) -> int:
        return int(self.centers.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.centers.shape[1])


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Overlap counts between two partitions of the same objects."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64, copy=True)
        if counts.ndim != 2 or (counts < 0).any():
            raise PartitionError("contingency counts must be a non-negative matrix")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def row_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sizes(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    def transposed(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T)


def nearest_centroid(points: np.ndarray, centers: np.ndarray, m: Metric) -> Tuple[np.ndarray, np.ndarray]:
    """Index of, and distance to, the nearest centre for every row of ``points``.

    ``argmin`` returns the first minimum, so ties go to the lowest centre index.
    """
    dist = pairwise_distances(points, centers, m)
    labels = np.argmin(dist, axis=1)
    return labels, dist[np.arange(dist.shape[0]), labels]


def assign_nearest(d: Dataset, c: Centroids, m: Metric) -> Partition:
    """Assign every object to its nearest centroid (lowest index on ties).

    Centroids that capture no object are reported through
    ``Partition.empty_clusters``.
    """
    if c.n_features != d.n_features:
        raise PartitionError(f"centroids have {c.n_features} features, dataset has {d.n_features}")
    labels, _ = nearest_centroid(d.points, c.centers, m)
    partition = Partition(assignment=labels, k=c.k)
    if partition.empty_clusters:
        logger.debug("Centroids %s captured no objects", list(partition.empty_clusters))
    return partition


def compute_centroids(d: Dataset, p: Partition) -> Centroids:
    """Arithmetic mean of the members of each cluster."""
    if p.n_objects != d.n_objects:
        raise PartitionError(f"partition covers {p.n_objects} objects, dataset has {d.n_objects}")
    p.require_complete()
    sums = np.zeros((p.k, d.n_features), dtype=np.float64)
    np.add.at(sums, p.assignment, d.points)
    return Centroids(sums / p.sizes()[:, None])


def contingency(a: Partition, b: Partition) -> ContingencyTable:
    """counts[i][j] = number of objects labeled i in ``a`` and j in ``b``."""
    if a.n_objects != b.n_objects:
        raise PartitionError(f"partition length mismatch: {a.n_objects} vs {b.n_objects}")
    if a.has_noise or b.has_noise:
        raise PartitionError("contingency requires noise-free partitions")
    counts = np.zeros((a.k, b.k), dtype=np.int64)
    np.add.at(counts, (a.assignment, b.assignment), 1)
    return ContingencyTable(counts)


def repair_empty_clusters(d: Dataset, c: Centroids, p: Partition, m: Metric) -> Tuple[Partition, Centroids]:
    """Re-seed every empty cluster at the object farthest from its centroid.

    Only objects whose cluster keeps at least one other member are candidates,
    so each repair fills one cluster without emptying another. Requires
    k <= n_objects.
    """
    if not p.empty_clusters:
        return p, c
    if p.k > d.n_objects:
        raise PartitionError(f"cannot fill {p.k} clusters from {d.n_objects} objects")
    labels = p.assignment.copy()
    centers = c.centers.copy()
    sizes = p.sizes()
    for empty in p.empty_clusters:
        own = pairwise_distances(d.points, centers, m)[np.arange(d.n_objects), labels]
        own = np.where(sizes[labels] > 1, own, -np.inf)
        donor = int(np.argmax(own))
        logger.warning("Re-seeding empty cluster %d at object %d", empty, donor)
        sizes[labels[donor]] -= 1
        sizes[empty] += 1
        labels[donor] = empty
        centers[empty] = d.points[donor]
    return Partition(assignment=labels, k=p.k), Centroids(centers)
