"""Typical K-means (Lloyd iterations) and the shared SSE fitness."""

import logging
from typing import NamedTuple, Tuple

import numpy as np

from ..config.models import KMeansConfig, KMeansInit, Metric
from ..core.dataset import Dataset, pairwise_distances
from ..core.partition import (
    Centroids,
    Partition,
    assign_nearest,
    compute_centroids,
    nearest_centroid,
    repair_empty_clusters,
)
from ..errors import ClusteringError, PartitionError

logger = logging.getLogger(__name__)


class KMeansResult(NamedTuple):
    """Outcome of one K-means run."""

    partition: Partition
    centroids: Centroids
    fitness: float
    iterations: int
    history: Tuple[float, ...]


def fitness_terms(dist: np.ndarray, m: Metric) -> np.ndarray:
    """Per-object SSE contribution D^2 from metric distances.

    ``squared_euclidean`` distances are already squared and pass through.
    """
    if Metric(m) == Metric.SQUARED_EUCLIDEAN:
        return dist
    return dist * dist


def sse_fitness(d: Dataset, c: Centroids, p: Partition, m: Metric) -> float:
    """Sum over objects of the squared distance to their assigned centroid."""
    if c.n_features != d.n_features:
        raise PartitionError(f"centroids have {c.n_features} features, dataset has {d.n_features}")
    if p.n_objects != d.n_objects:
        raise PartitionError(f"partition covers {p.n_objects} objects, dataset has {d.n_objects}")
    if p.has_noise:
        raise PartitionError("fitness is undefined for noise objects")
    if p.k != c.k:
        raise PartitionError(f"partition has k={p.k}, centroids have k={c.k}")
    dist = pairwise_distances(d.points, c.centers, m)[np.arange(d.n_objects), p.assignment]
    return float(np.sum(fitness_terms(dist, m)))


def mean_shift(old: np.ndarray, new: np.ndarray, m: Metric) -> float:
    """Average metric distance between matching rows of two centroid sets."""
    return float(np.mean(np.diag(pairwise_distances(old, new, m))))


def lloyd_step(points: np.ndarray, centers: np.ndarray, m: Metric) -> np.ndarray:
    """One assign-then-average pass; centres that capture nothing stay put."""
    labels, _ = nearest_centroid(points, centers, m)
    k = centers.shape[0]
    sums = np.zeros_like(centers)
    np.add.at(sums, labels, points)
    counts = np.bincount(labels, minlength=k)
    moved = centers.copy()
    filled = counts > 0
    moved[filled] = sums[filled] / counts[filled, None]
    return moved


def initial_centroids(d: Dataset, cfg: KMeansConfig, rng: np.random.Generator) -> Centroids:
    """Explicit centres, or k distinct objects drawn without replacement."""
    if cfg.init == KMeansInit.EXPLICIT:
        centers = np.asarray(cfg.initial_centroids, dtype=np.float64)
        if centers.shape[1] != d.n_features:
            raise ClusteringError(f"initial centroids have {centers.shape[1]} features, dataset has {d.n_features}")
        return Centroids(centers)
    chosen = rng.choice(d.n_objects, size=cfg.k, replace=False)
    return Centroids(d.points[chosen])


def kmeans_run(d: Dataset, cfg: KMeansConfig) -> KMeansResult:
    """Run Lloyd iterations until the assignment is stable.

    One iteration is one assignment pass followed by a centroid update. The
    loop stops when a pass reproduces the previous assignment, when the mean
    centroid displacement drops below ``tol``, or after ``max_iter`` passes.

    Args:
        d: Dataset to cluster
        cfg: K-means configuration

    Returns:
        KMeansResult with the final partition, the centroids (means of that
        partition), the SSE fitness, the number of passes and the per-pass
        fitness history

    Raises:
        ClusteringError: If k exceeds the number of objects
    """
    if cfg.k > d.n_objects:
        raise ClusteringError(f"k={cfg.k} exceeds the {d.n_objects} objects of '{d.name}'")

    rng = np.random.default_rng(cfg.seed)
    centroids = initial_centroids(d, cfg, rng)
    partition = None
    history = []
    iterations = 0

    for iteration in range(1, cfg.max_iter + 1):
        iterations = iteration
        assigned = assign_nearest(d, centroids, cfg.metric)
        assigned, centroids = repair_empty_clusters(d, centroids, assigned, cfg.metric)
        if partition is not None and np.array_equal(assigned.assignment, partition.assignment):
            logger.debug("K-means converged after %d iterations", iteration)
            break

        updated = compute_centroids(d, assigned)
        shift = mean_shift(centroids.centers, updated.centers, cfg.metric)
        partition, centroids = assigned, updated
        fitness = sse_fitness(d, centroids, partition, cfg.metric)
        if history and fitness > history[-1] + 1e-9 * max(1.0, abs(history[-1])):
            # Only possible when the metric is not squared euclidean
            logger.debug("K-means fitness rose from %.6g to %.6g", history[-1], fitness)
        history.append(fitness)
        logger.debug("K-means iteration %d: fitness %.6g, shift %.3g", iteration, fitness, shift)
        if shift < cfg.tol:
            break

    assert partition is not None
    return KMeansResult(
        partition=partition,
        centroids=centroids,
        fitness=history[-1],
        iterations=iterations,
        history=tuple(history),
    )
