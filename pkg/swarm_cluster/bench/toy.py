"""The 15-point, one-feature worked example (Manhattan K-means with k = 3)."""

from typing import List, NamedTuple

import numpy as np
import pandas as pd

from ..algorithms.kmeans import KMeansResult, kmeans_run
from ..config.models import KMeansConfig, KMeansInit, Metric
from ..core.dataset import Dataset, pairwise_distances
from ..core.partition import Centroids, Partition, compute_centroids
from ..evaluation.validity import davies_bouldin, davies_bouldin_ratios, dunn, dunn_ratio_table

TOY_VALUES = [10, 12, 15, 7, 22, 29, 31, 3, 7, 5, 1, 4, 12, 11, 10]
TOY_INITIAL_CENTROIDS = [[10.0], [22.0], [1.0]]
TOY_METRIC = Metric.MANHATTAN

# Published figures that no consistent distance convention reproduces
PUBLISHED_DB = 0.203
PUBLISHED_DUNN_13 = 1.7


class ToyReport(NamedTuple):
    """Every table of the worked example."""

    dataset: Dataset
    result: KMeansResult
    iteration_tables: List[pd.DataFrame]
    iteration_centroids: List[np.ndarray]
    first_sizes: List[int]
    db_ratios: np.ndarray
    db_value: float
    dunn_table: np.ndarray
    dunn_value: float


def toy_dataset() -> Dataset:
    return Dataset(points=np.asarray(TOY_VALUES, dtype=np.float64), feature_names=("value",), name="toy")


def toy_config() -> KMeansConfig:
    return KMeansConfig(
        k=3, metric=TOY_METRIC, init=KMeansInit.EXPLICIT, initial_centroids=TOY_INITIAL_CENTROIDS, tol=0.0
    )


def _distance_table(d: Dataset, centers: np.ndarray) -> pd.DataFrame:
    dist = pairwise_distances(d.points, centers, TOY_METRIC)
    frame = pd.DataFrame(dist, columns=[f"C{j + 1}" for j in range(centers.shape[0])])
    frame.insert(0, "value", d.points[:, 0])
    frame["cluster"] = np.argmin(dist, axis=1) + 1
    frame.index = pd.RangeIndex(1, d.n_objects + 1, name="object")
    return frame


def run_toy() -> ToyReport:
    """Run the worked example and collect its per-iteration tables and index diagnostics.

    The Lloyd passes of ``kmeans_run`` are replayed to expose the distance
    table of every pass. Davies-Bouldin uses the initial centroids
    {10, 22, 1} against the final clusters.
    """
    d = toy_dataset()
    result = kmeans_run(d, toy_config())

    centers = np.asarray(TOY_INITIAL_CENTROIDS, dtype=np.float64)
    tables, centroids = [], []
    for _ in range(result.iterations):
        table = _distance_table(d, centers)
        tables.append(table)
        centroids.append(centers)
        partition = Partition(assignment=table["cluster"].to_numpy() - 1, k=centers.shape[0])
        centers = compute_centroids(d, partition).centers

    first_sizes = np.bincount(tables[0]["cluster"].to_numpy() - 1, minlength=3).tolist()
    initial = Centroids(np.asarray(TOY_INITIAL_CENTROIDS))
    return ToyReport(
        dataset=d,
        result=result,
        iteration_tables=tables,
        iteration_centroids=centroids,
        first_sizes=[int(s) for s in first_sizes],
        db_ratios=davies_bouldin_ratios(d, result.partition, TOY_METRIC, centroids=initial),
        db_value=davies_bouldin(d, result.partition, TOY_METRIC, centroids=initial),
        dunn_table=dunn_ratio_table(d, result.partition, TOY_METRIC),
        dunn_value=dunn(d, result.partition, TOY_METRIC),
    )


def _pair_frame(table: np.ndarray) -> pd.DataFrame:
    labels = [f"C{i + 1}" for i in range(table.shape[0])]
    return pd.DataFrame(table, index=labels, columns=labels)


def format_toy(report: ToyReport) -> str:
    """Plain-text rendering of the worked example."""
    lines = []
    for number, (table, centers) in enumerate(zip(report.iteration_tables, report.iteration_centroids), start=1):
        shown = ", ".join(f"{c:.3f}" for c in centers[:, 0])
        lines.append(f"Iteration {number} (centroids {shown}, Manhattan distance)")
        lines.append(table.to_string(float_format=lambda v: f"{v:.3f}"))
        sizes = np.bincount(table["cluster"].to_numpy() - 1, minlength=centers.shape[0])
        lines.append("Number of items: " + ", ".join(f"C{j + 1}={n}" for j, n in enumerate(sizes)))
        lines.append("")

    final = ", ".join(f"{c:.3f}" for c in report.result.centroids.centers[:, 0])
    lines.append(f"Converged after {report.result.iterations} iterations; centroids {final}")
    lines.append(f"Fitness (SSE): {report.result.fitness:.4f}")
    lines.append("")
    lines.append("Davies-Bouldin ratios with centroids 10, 22, 1")
    lines.append(_pair_frame(report.db_ratios).to_string(float_format=lambda v: f"{v:.4f}", na_rep="-"))
    lines.append(f"Davies-Bouldin index: {report.db_value:.4f} (printed value {PUBLISHED_DB} is not reproducible)")
    lines.append("")
    lines.append("Dunn ratios D(i, j) = min distance(Ci, Cj) / diameter(Ci)")
    lines.append(_pair_frame(report.dunn_table).to_string(float_format=lambda v: f"{v:.4f}", na_rep="-"))
    lines.append(
        f"Dunn index: {report.dunn_value:.4f} (printed D(1,3) = {PUBLISHED_DUNN_13} is not reproducible; "
        f"consistent value {report.dunn_table[0, 2]:.4f})"
    )
    return "\n".join(lines)
