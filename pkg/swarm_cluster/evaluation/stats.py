"""One-way ANOVA, F-distribution probabilities and box-plot summaries."""

import logging
import math
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy import special

from ..errors import StatsError

logger = logging.getLogger(__name__)


class AnovaTable(BaseModel):
    """Six-column one-way ANOVA decomposition (Source, SS, df, MS, F, Prob>F)."""

    ss_columns: float = Field(..., ge=0.0)
    ss_error: float = Field(..., ge=0.0)
    ss_total: float = Field(..., ge=0.0)
    df_columns: int = Field(..., ge=0)
    df_error: int = Field(..., ge=0)
    df_total: int = Field(..., ge=0)
    ms_columns: float
    ms_error: float
    f: float = Field(..., ge=0.0)
    prob_gt_f: float = Field(..., ge=0.0, le=1.0)
    group_sizes: List[int] = Field(default_factory=list)
    notice: Optional[str] = None

    def to_rows(self) -> List[Dict[str, Union[str, float, int, None]]]:
        """Rows Columns/Error/Total in the classic ANOVA table layout."""
        return [
            {
                "Source": "Columns",
                "SS": self.ss_columns,
                "df": self.df_columns,
                "MS": self.ms_columns,
                "F": self.f,
                "Prob>F": self.prob_gt_f,
            },
            {
                "Source": "Error",
                "SS": self.ss_error,
                "df": self.df_error,
                "MS": self.ms_error,
                "F": None,
                "Prob>F": None,
            },
            {"Source": "Total", "SS": self.ss_total, "df": self.df_total, "MS": None, "F": None, "Prob>F": None},
        ]


class BoxplotStats(BaseModel):
    """Five-number summary with 1.5 IQR outliers."""

    min: float
    q1: float
    median: float
    q3: float
    max: float
    outliers: List[float] = Field(default_factory=list)
    n: int = Field(..., ge=1)


def _check_dof(d1: int, d2: int) -> None:
    if d1 < 1 or d2 < 1:
        raise StatsError(f"degrees of freedom must be positive, got ({d1}, {d2})")


def f_cdf(x: float, d1: int, d2: int) -> float:
    """P(F <= x) for F(d1, d2), via the regularized incomplete beta function."""
    _check_dof(d1, d2)
    if x < 0 or math.isnan(x):
        raise StatsError(f"F value must be non-negative, got {x}")
    if math.isinf(x):
        return 1.0
    return float(special.betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))


def f_sf(x: float, d1: int, d2: int) -> float:
    """P(F > x), evaluated directly so that tiny tail probabilities keep their precision."""
    _check_dof(d1, d2)
    if x < 0 or math.isnan(x):
        raise StatsError(f"F value must be non-negative, got {x}")
    if math.isinf(x):
        return 0.0
    return float(special.fdtrc(d1, d2, x))


def anova_from_sums(
    ss_columns: float,
    df_columns: int,
    ss_error: float,
    df_error: int,
    group_sizes: Optional[List[int]] = None,
) -> AnovaTable:
    """Build the ANOVA table from precomputed sums of squares.

    A zero error sum of squares gives F = 0 (prob 1) when the between-group
    sum is also zero, and F = inf (prob 0) otherwise; both cases carry a
    ``notice``.
    """
    _check_dof(df_columns, df_error)
    if ss_columns < 0 or ss_error < 0:
        raise StatsError("sums of squares must be non-negative")

    ms_columns = ss_columns / df_columns
    ms_error = ss_error / df_error
    notice = None
    if ss_error == 0:
        if ss_columns == 0:
            f, prob = 0.0, 1.0
            notice = "all samples are equal; F set to 0"
        else:
            f, prob = math.inf, 0.0
            notice = "zero within-group variance with differing group means; F is infinite"
        logger.warning("Degenerate ANOVA: %s", notice)
    else:
        f = ms_columns / ms_error
        prob = f_sf(f, df_columns, df_error)

    return AnovaTable(
        ss_columns=ss_columns,
        ss_error=ss_error,
        ss_total=ss_columns + ss_error,
        df_columns=df_columns,
        df_error=df_error,
        df_total=df_columns + df_error,
        ms_columns=ms_columns,
        ms_error=ms_error,
        f=f,
        prob_gt_f=prob,
        group_sizes=list(group_sizes or []),
        notice=notice,
    )


def anova_oneway(groups: Sequence[Sequence[float]]) -> AnovaTable:
    """One-way ANOVA across groups of possibly unequal size.

    Raises:
        StatsError: Fewer than two groups, an empty group, non-finite
            samples, or no more samples than groups
    """
    arrays = [np.asarray(g, dtype=np.float64).reshape(-1) for g in groups]
    if len(arrays) < 2:
        raise StatsError(f"ANOVA needs at least 2 groups, got {len(arrays)}")
    sizes = [int(a.shape[0]) for a in arrays]
    if min(sizes) < 1:
        raise StatsError("every ANOVA group needs at least one sample")
    total = sum(sizes)
    if total <= len(arrays):
        raise StatsError(f"ANOVA needs more samples ({total}) than groups ({len(arrays)})")
    values = np.concatenate(arrays)
    if not np.all(np.isfinite(values)):
        raise StatsError("ANOVA samples must be finite")

    grand = values.mean()
    means = np.array([a.mean() for a in arrays])
    ss_columns = float(np.sum(np.asarray(sizes) * (means - grand) ** 2))
    ss_error = float(sum(np.sum((a - mu) ** 2) for a, mu in zip(arrays, means)))

    # Rounding leaves residue of order eps * scale when a group is constant
    scale = float(np.sum(values * values)) or 1.0
    tiny = 1e-24 * scale
    if ss_error <= tiny:
        ss_error = 0.0
    if ss_columns <= tiny:
        ss_columns = 0.0
    return anova_from_sums(ss_columns, len(arrays) - 1, ss_error, total - len(arrays), group_sizes=sizes)


def boxplot_stats(samples: Sequence[float]) -> BoxplotStats:
    """Quartiles by linear interpolation; outliers lie beyond 1.5 IQR from the box.

    ``min`` and ``max`` are the whisker ends, taken over the non-outlier samples.
    """
    values = np.asarray(samples, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise StatsError("box plot needs at least one sample")
    if not np.all(np.isfinite(values)):
        raise StatsError("box plot samples must be finite")
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    spread = 1.5 * (q3 - q1)
    outside = (values < q1 - spread) | (values > q3 + spread)
    inliers = values[~outside]
    return BoxplotStats(
        min=float(inliers.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=float(inliers.max()),
        outliers=sorted(float(v) for v in values[outside]),
        n=int(values.size),
    )
