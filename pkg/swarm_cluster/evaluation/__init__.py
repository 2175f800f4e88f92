"""Cluster validity indices and the statistics used to compare algorithms."""

from .stats import AnovaTable, BoxplotStats, anova_from_sums, anova_oneway, boxplot_stats, f_cdf, f_sf
from .validity import (
    IndexReport,
    accuracy,
    compute_indices,
    davies_bouldin,
    davies_bouldin_ratios,
    dunn,
    dunn_ratio_table,
    mirkin,
    rand_index,
    silhouette,
)

__all__ = [
    "IndexReport",
    "silhouette",
    "davies_bouldin",
    "davies_bouldin_ratios",
    "dunn",
    "dunn_ratio_table",
    "rand_index",
    "mirkin",
    "accuracy",
    "compute_indices",
    "AnovaTable",
    "BoxplotStats",
    "anova_oneway",
    "anova_from_sums",
    "f_cdf",
    "f_sf",
    "boxplot_stats",
]
