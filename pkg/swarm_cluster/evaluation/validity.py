"""Internal and external cluster validity indices.

Internal indices (silhouette, Davies-Bouldin, Dunn) score a partition against
the data it was computed from. External indices (Rand, Mirkin, accuracy)
compare it with a reference labeling.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import linear_sum_assignment

from ..config.models import Metric
from ..core.dataset import Dataset, pairwise_distances
from ..core.partition import Centroids, Partition
from ..errors import SwarmClusterError, ValidityError

logger = logging.getLogger(__name__)

Labels = Union[Partition, Sequence, np.ndarray]


class IndexReport(BaseModel):
    """All validity indices of one partition.

    External fields stay ``None`` when no ground truth is available. An index
    that could not be computed is ``None`` and its reason is kept in ``errors``.
    """

    silhouette_overall: Optional[float] = Field(None, ge=-1.0, le=1.0)
    silhouette_per_cluster: List[float] = Field(default_factory=list)
    db: Optional[float] = Field(None, ge=0.0)
    dunn: Optional[float] = Field(None, ge=0.0)
    rand: Optional[float] = Field(None, ge=0.0, le=1.0)
    mirkin_raw: Optional[int] = Field(None, ge=0)
    mirkin_normalized: Optional[float] = Field(None, ge=0.0, le=1.0)
    accuracy: Optional[float] = Field(None, ge=0.0, le=1.0)
    n_clusters: int = 0
    excluded_noise: int = Field(0, ge=0)
    errors: Dict[str, str] = Field(default_factory=dict)

    def to_row(self) -> Dict[str, Optional[float]]:
        """Flat values for one row of the per-trial table."""
        return {
            "silhouette": self.silhouette_overall,
            "db": self.db,
            "dunn": self.dunn,
            "rand": self.rand,
            "mirkin_norm": self.mirkin_normalized,
            "accuracy": self.accuracy,
            "excluded_noise": self.excluded_noise,
        }


def _check_length(d: Dataset, p: Partition) -> None:
    if p.n_objects != d.n_objects:
        raise ValidityError(f"partition covers {p.n_objects} objects, dataset has {d.n_objects}")


def _clustered(d: Dataset, p: Partition) -> Tuple[np.ndarray, np.ndarray, int]:
    """Non-noise points with their labels compacted to the non-empty clusters."""
    _check_length(d, p)
    keep = ~p.noise_mask
    compact = Partition.from_labels(p.assignment[keep])
    return d.points[keep], compact.assignment, compact.k


def silhouette(d: Dataset, p: Partition, m: Metric) -> Tuple[float, np.ndarray, np.ndarray]:
    """Silhouette widths s(i) = (b - a) / max(a, b).

    Noise objects are ignored and empty clusters dropped. Objects in a
    singleton cluster, and objects with a = b = 0, get s(i) = 0.

    Returns:
        Tuple of (overall mean width, per-object widths, per-cluster mean widths)

    Raises:
        ValidityError: If fewer than two clusters remain
    """
    points, labels, k = _clustered(d, p)
    if k < 2:
        raise ValidityError(f"silhouette needs at least 2 clusters, got {k}")

    dist = pairwise_distances(points, points, m)
    onehot = (labels[:, None] == np.arange(k)[None, :]).astype(np.float64)
    sums = dist @ onehot
    sizes = onehot.sum(axis=0)
    rows = np.arange(points.shape[0])

    own_size = sizes[labels]
    a = np.divide(sums[rows, labels], own_size - 1, out=np.zeros(points.shape[0]), where=own_size > 1)
    mean_other = sums / sizes[None, :]
    mean_other[rows, labels] = np.inf
    b = mean_other.min(axis=1)

    denom = np.maximum(a, b)
    s = np.divide(b - a, denom, out=np.zeros(points.shape[0]), where=denom > 0)
    s[own_size == 1] = 0.0
    per_cluster = np.array([s[labels == c].mean() for c in range(k)])
    return float(s.mean()), s, per_cluster


def _centroid_scatter(
    d: Dataset, p: Partition, m: Metric, centroids: Optional[Centroids]
) -> Tuple[np.ndarray, np.ndarray]:
    _check_length(d, p)
    kept, keep = p.without_noise()
    if kept.k < 2:
        raise ValidityError(f"Davies-Bouldin needs at least 2 clusters, got {kept.k}")
    if kept.empty_clusters:
        raise ValidityError(f"Davies-Bouldin undefined with empty clusters {list(kept.empty_clusters)}")
    points = d.points[keep]
    if centroids is None:
        sums = np.zeros((kept.k, d.n_features))
        np.add.at(sums, kept.assignment, points)
        centers = sums / kept.sizes()[:, None]
    else:
        if centroids.k != kept.k or centroids.n_features != d.n_features:
            raise ValidityError(f"centroids of shape {centroids.centers.shape} do not match the partition")
        centers = centroids.centers

    own = pairwise_distances(points, centers, m)[np.arange(points.shape[0]), kept.assignment]
    scatter = np.bincount(kept.assignment, weights=own, minlength=kept.k) / kept.sizes()
    return centers, scatter


def davies_bouldin_ratios(
    d: Dataset, p: Partition, m: Metric, centroids: Optional[Centroids] = None
) -> np.ndarray:
    """k x k table of (scatter_i + scatter_j) / d(centre_i, centre_j); NaN on the diagonal.

    Scatter is the mean member-to-centre distance. Centres are the cluster
    means unless ``centroids`` is given.

    Raises:
        ValidityError: Fewer than two clusters, an empty cluster, or two
            coincident centres
    """
    centers, scatter = _centroid_scatter(d, p, m, centroids)
    separation = pairwise_distances(centers, centers, m)
    k = centers.shape[0]
    off_diagonal = ~np.eye(k, dtype=bool)
    coincident = np.argwhere((separation == 0) & off_diagonal)
    if coincident.size:
        i, j = coincident[0]
        raise ValidityError(f"clusters {int(i)} and {int(j)} have coincident centroids")
    ratios = np.full((k, k), np.nan)
    ratios[off_diagonal] = ((scatter[:, None] + scatter[None, :]) / np.where(off_diagonal, separation, 1.0))[
        off_diagonal
    ]
    return ratios


def davies_bouldin(d: Dataset, p: Partition, m: Metric, centroids: Optional[Centroids] = None) -> float:
    """Mean over clusters of the worst scatter-to-separation ratio (lower is better)."""
    ratios = davies_bouldin_ratios(d, p, m, centroids)
    return float(np.mean(np.nanmax(ratios, axis=1)))


def _separation_and_diameter(d: Dataset, p: Partition, m: Metric) -> Tuple[np.ndarray, np.ndarray]:
    points, labels, k = _clustered(d, p)
    if k < 2:
        raise ValidityError(f"Dunn index needs at least 2 clusters, got {k}")
    dist = pairwise_distances(points, points, m)
    masks = [labels == c for c in range(k)]
    diameter = np.array([dist[np.ix_(mask, mask)].max() for mask in masks])
    inter = np.full((k, k), np.nan)
    for i in range(k):
        for j in range(k):
            if i != j:
                inter[i, j] = dist[np.ix_(masks[i], masks[j])].min()
    return inter, diameter


def dunn(d: Dataset, p: Partition, m: Metric) -> float:
    """Smallest between-cluster object distance over the largest cluster diameter.

    Raises:
        ValidityError: Fewer than two clusters, or every cluster has zero diameter
    """
    inter, diameter = _separation_and_diameter(d, p, m)
    largest = diameter.max()
    if largest == 0:
        raise ValidityError("Dunn index undefined: every cluster has zero diameter")
    return float(np.nanmin(inter) / largest)


def dunn_ratio_table(d: Dataset, p: Partition, m: Metric) -> np.ndarray:
    """D[i, j] = min distance between clusters i and j over the diameter of cluster i.

    Diagonal entries and rows of zero-diameter clusters are NaN.
    """
    inter, diameter = _separation_and_diameter(d, p, m)
    with np.errstate(divide="ignore", invalid="ignore"):
        table = inter / diameter[:, None]
    table[diameter == 0, :] = np.nan
    return table


def _codes(labels: Labels) -> np.ndarray:
    if isinstance(labels, Partition):
        return labels.assignment
    raw = np.asarray(labels).reshape(-1)
    if raw.dtype.kind in "OU":
        raw = raw.astype(str)
    _, codes = np.unique(raw, return_inverse=True)
    return codes.reshape(-1)


def _pair_counts(a: Labels, b: Labels, min_objects: int) -> Tuple[np.ndarray, np.ndarray, int]:
    ca, cb = _codes(a), _codes(b)
    if ca.shape[0] != cb.shape[0]:
        raise ValidityError(f"label length mismatch: {ca.shape[0]} vs {cb.shape[0]}")
    if ca.shape[0] < min_objects:
        raise ValidityError(f"need at least {min_objects} objects, got {ca.shape[0]}")
    _, ca = np.unique(ca, return_inverse=True)
    _, cb = np.unique(cb, return_inverse=True)
    counts = np.zeros((int(ca.max(initial=-1)) + 1, int(cb.max(initial=-1)) + 1), dtype=np.int64)
    np.add.at(counts, (ca.reshape(-1), cb.reshape(-1)), 1)
    return ca, counts, int(ca.shape[0])


def rand_index(a: Labels, b: Labels) -> float:
    """Fraction of object pairs on which two labelings agree.

    Computed from the contingency table: together-in-both plus apart-in-both
    pairs over all n(n - 1)/2 pairs.
    """
    _, counts, n = _pair_counts(a, b, min_objects=2)
    total = n * (n - 1) // 2
    both = int((counts * (counts - 1)).sum()) // 2
    rows = counts.sum(axis=1)
    cols = counts.sum(axis=0)
    in_a = int((rows * (rows - 1)).sum()) // 2
    in_b = int((cols * (cols - 1)).sum()) // 2
    return (total + 2 * both - in_a - in_b) / total


def mirkin(a: Labels, b: Labels) -> Tuple[int, float]:
    """Mirkin distance sum|C_i|^2 + sum|C'_j|^2 - 2 sum m_ij^2, raw and divided by n^2."""
    _, counts, n = _pair_counts(a, b, min_objects=1)
    rows = counts.sum(axis=1)
    cols = counts.sum(axis=0)
    raw = int((rows * rows).sum() + (cols * cols).sum() - 2 * (counts * counts).sum())
    return raw, raw / (n * n)


def accuracy(pred: Partition, truth: Optional[Labels]) -> float:
    """Share of objects labeled correctly under the best one-to-one cluster-to-class mapping.

    Noise objects count as incorrect.

    Raises:
        ValidityError: If ground truth is missing or of the wrong length
    """
    if truth is None:
        raise ValidityError("accuracy needs ground-truth labels")
    classes = _codes(truth)
    if classes.shape[0] != pred.n_objects:
        raise ValidityError(f"label length mismatch: {pred.n_objects} vs {classes.shape[0]}")
    keep = ~pred.noise_mask
    if not keep.any():
        return 0.0
    counts = np.zeros((pred.k, int(classes.max()) + 1), dtype=np.int64)
    np.add.at(counts, (pred.assignment[keep], classes[keep]), 1)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(counts[rows, cols].sum() / pred.n_objects)


def compute_indices(
    d: Dataset, p: Partition, m: Metric, truth: Optional[Labels] = None
) -> IndexReport:
    """Score a partition with every index, skipping noise objects.

    ``truth`` defaults to the dataset labels. Failures of single indices are
    collected in ``IndexReport.errors`` rather than raised.
    """
    _check_length(d, p)
    if truth is None and d.has_labels:
        truth = d.labels
    errors: Dict[str, str] = {}
    values: Dict[str, object] = {}

    keep = ~p.noise_mask
    if not keep.any():
        errors["internal"] = "every object is noise"
    else:
        sub = Dataset(points=d.points[keep], feature_names=d.feature_names, name=d.name)
        compact = Partition.from_labels(p.assignment[keep])
        values["n_clusters"] = compact.k
        try:
            overall, _, per_cluster = silhouette(sub, compact, m)
            values["silhouette_overall"] = overall
            values["silhouette_per_cluster"] = per_cluster.tolist()
        except SwarmClusterError as e:
            errors["silhouette"] = str(e)
        try:
            values["db"] = davies_bouldin(sub, compact, m)
        except SwarmClusterError as e:
            errors["db"] = str(e)
        try:
            values["dunn"] = dunn(sub, compact, m)
        except SwarmClusterError as e:
            errors["dunn"] = str(e)

        if truth is not None:
            reference = np.asarray(truth, dtype=object).reshape(-1)
            if reference.shape[0] != d.n_objects:
                errors["external"] = f"{reference.shape[0]} ground-truth labels for {d.n_objects} objects"
            else:
                try:
                    values["rand"] = rand_index(compact, reference[keep])
                except SwarmClusterError as e:
                    errors["rand"] = str(e)
                try:
                    values["mirkin_raw"], values["mirkin_normalized"] = mirkin(compact, reference[keep])
                except SwarmClusterError as e:
                    errors["mirkin"] = str(e)
                values["accuracy"] = accuracy(p, reference)

    for key, message in errors.items():
        logger.debug("Index %s not computed: %s", key, message)
    return IndexReport(**values, excluded_noise=p.noise_count, errors=errors)
