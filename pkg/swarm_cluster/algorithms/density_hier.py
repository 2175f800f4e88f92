"""DBSCAN and agglomerative hierarchical clustering baselines.

Both algorithms are deterministic and work from the full pairwise distance
matrix, which is fine for the few hundred objects these datasets hold.
"""

import logging
from collections import deque

import numpy as np

from ..config.models import DbscanConfig, HierConfig, Linkage, Metric
from ..core.dataset import Dataset, pairwise_distances
from ..core.partition import NOISE, Partition
from ..errors import ClusteringError

logger = logging.getLogger(__name__)

_UNVISITED = -2


def region_query(d: Dataset, idx: int, eps: float, m: Metric) -> np.ndarray:
    """Sorted indices of every object within ``eps`` of object ``idx`` (itself included)."""
    if not 0 <= idx < d.n_objects:
        raise ClusteringError(f"object index {idx} outside [0, {d.n_objects})")
    dist = pairwise_distances(d.points[idx : idx + 1], d.points, m)[0]
    return np.flatnonzero(dist <= eps)


def dbscan_run(d: Dataset, cfg: DbscanConfig) -> Partition:
    """Density-based clustering; unreachable objects are labeled NOISE.

    Objects are scanned in index order. A core object (at least ``minpts``
    objects in its closed eps-ball) starts a cluster that grows through every
    density-reachable object. A border object keeps the first cluster that
    reaches it.
    """
    dist = pairwise_distances(d.points, d.points, cfg.metric)
    neighborhoods = [np.flatnonzero(row <= cfg.eps) for row in dist]
    is_core = np.array([len(n) >= cfg.minpts for n in neighborhoods], dtype=bool)

    labels = np.full(d.n_objects, _UNVISITED, dtype=np.int64)
    cluster = 0
    for idx in range(d.n_objects):
        if labels[idx] != _UNVISITED:
            continue
        if not is_core[idx]:
            labels[idx] = NOISE
            continue

        labels[idx] = cluster
        queue = deque(neighborhoods[idx])
        while queue:
            j = int(queue.popleft())
            if labels[j] == NOISE:
                labels[j] = cluster
            if labels[j] != _UNVISITED:
                continue
            labels[j] = cluster
            if is_core[j]:
                queue.extend(neighborhoods[j])
        cluster += 1

    logger.debug(
        "DBSCAN eps=%g minpts=%d: %d clusters, %d noise", cfg.eps, cfg.minpts, cluster, int((labels == NOISE).sum())
    )
    return Partition(assignment=labels, k=cluster)


def _lance_williams(linkage: Linkage, d_i: np.ndarray, d_j: np.ndarray, n_i: int, n_j: int) -> np.ndarray:
    if linkage == Linkage.SINGLE:
        return np.minimum(d_i, d_j)
    if linkage == Linkage.COMPLETE:
        return np.maximum(d_i, d_j)
    return (n_i * d_i + n_j * d_j) / (n_i + n_j)


def hierarchical_run(d: Dataset, cfg: HierConfig) -> Partition:
    """Agglomerative clustering from singletons down to ``cfg.k`` clusters.

    Each cluster is identified by its smallest member index. The closest pair
    is merged first; among equally close pairs the one with the smallest
    (i, j) ids wins.

    Raises:
        ClusteringError: If k exceeds the number of objects
    """
    n = d.n_objects
    if cfg.k > n:
        raise ClusteringError(f"k={cfg.k} exceeds the {n} objects of '{d.name}'")

    dist = pairwise_distances(d.points, d.points, cfg.metric)
    np.fill_diagonal(dist, np.inf)
    sizes = np.ones(n, dtype=np.int64)
    owner = np.arange(n)

    for _ in range(n - cfg.k):
        # argmin scans row-major, so ties resolve to the smallest (i, j)
        i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
        i, j = (int(i), int(j)) if i < j else (int(j), int(i))
        merged = _lance_williams(cfg.linkage, dist[i], dist[j], sizes[i], sizes[j])
        dist[i, :] = merged
        dist[:, i] = merged
        dist[i, i] = np.inf
        dist[j, :] = np.inf
        dist[:, j] = np.inf
        sizes[i] += sizes[j]
        sizes[j] = 0
        owner[owner == j] = i

    return Partition.from_labels(owner)
