"""Experiment report records, aggregation and CSV/JSON emission."""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from ..config.models import ExperimentConfig, ReportFormat
from ..errors import ReportError, StatsError
from ..evaluation.stats import AnovaTable, BoxplotStats, anova_oneway, boxplot_stats
from ..evaluation.validity import IndexReport

logger = logging.getLogger(__name__)

PER_TRIAL_COLUMNS = [
    "dataset",
    "algorithm",
    "trial",
    "seed",
    "silhouette",
    "db",
    "dunn",
    "rand",
    "mirkin_norm",
    "accuracy",
    "fitness",
    "iterations",
    "runtime_ms",
    "excluded_noise",
    "replicated",
]

# Index grid rows and the per-trial column each one aggregates
INDEX_ROWS = {"dunn": "dunn", "db": "db", "rand": "rand", "mirkin": "mirkin_norm"}

FLOAT_FORMAT = "%.17g"


class TrialRecord(BaseModel):
    """Scores of one (dataset, algorithm, trial) run."""

    dataset: str
    algorithm: str
    trial: int = Field(..., ge=0)
    seed: int
    indices: IndexReport
    fitness: Optional[float] = None
    iterations: Optional[int] = None
    runtime_ms: float = Field(0.0, exclude=True)
    replicated: bool = False

    def to_row(self) -> Dict[str, Any]:
        """Flat row in ``PER_TRIAL_COLUMNS`` order."""
        row = {
            "dataset": self.dataset,
            "algorithm": self.algorithm,
            "trial": self.trial,
            "seed": self.seed,
            **self.indices.to_row(),
            "fitness": self.fitness,
            "iterations": self.iterations,
            "runtime_ms": self.runtime_ms,
            "replicated": self.replicated,
        }
        return {column: row[column] for column in PER_TRIAL_COLUMNS}


class CellError(BaseModel):
    """A failure captured while the rest of the experiment kept running."""

    dataset: str
    algorithm: Optional[str] = None
    trial: Optional[int] = None
    stage: str
    message: str


class DatasetSummary(BaseModel):
    """Shape of a dataset as it was clustered."""

    n_objects: int
    n_features: int
    n_classes: Optional[int] = None
    k: int
    synthetic: bool = False


class AnovaResult(BaseModel):
    """ANOVA over the silhouette samples of the compared algorithms.

    ``table`` is None when the comparison was refused; ``notice`` then says why.
    """

    algorithms: List[str] = Field(default_factory=list)
    excluded: List[str] = Field(default_factory=list)
    table: Optional[AnovaTable] = None
    notice: Optional[str] = None


class ExperimentReport(BaseModel):
    """Everything an experiment produced, keyed by dataset then algorithm in declared order."""

    name: str
    trials: int
    base_seed: int
    algorithms: List[str]
    datasets: Dict[str, DatasetSummary] = Field(default_factory=dict)
    settings: Dict[str, Dict[str, Dict[str, Any]]] = Field(default_factory=dict)
    per_trial: List[TrialRecord] = Field(default_factory=list)
    silhouette_table: Dict[str, Dict[str, Optional[float]]] = Field(default_factory=dict)
    silhouette_best: Dict[str, Dict[str, Optional[float]]] = Field(default_factory=dict)
    accuracy_table: Dict[str, Dict[str, Optional[float]]] = Field(default_factory=dict)
    index_tables: Dict[str, Dict[str, Dict[str, Optional[float]]]] = Field(default_factory=dict)
    anova_tables: Dict[str, AnovaResult] = Field(default_factory=dict)
    boxplot_data: Dict[str, Dict[str, Optional[BoxplotStats]]] = Field(default_factory=dict)
    errors: List[CellError] = Field(default_factory=list)


def _samples(records: Iterable[TrialRecord], column: str) -> List[float]:
    values = [r.to_row()[column] for r in records]
    return [float(v) for v in values if v is not None and np.isfinite(v)]


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


def _anova(cfg: ExperimentConfig, grouped: Dict[str, List[TrialRecord]]) -> AnovaResult:
    force = cfg.experiment.force_anova_all
    included, excluded = [], []
    for spec in cfg.algorithms:
        (excluded if spec.kind.is_deterministic and not force else included).append(spec.name)

    groups = {name: _samples(grouped.get(name, []), "silhouette") for name in included}
    empty = [name for name, samples in groups.items() if not samples]
    result = AnovaResult(algorithms=[n for n in included if n not in empty], excluded=excluded + empty)
    try:
        result.table = anova_oneway([groups[name] for name in result.algorithms])
        result.notice = result.table.notice
    except StatsError as e:
        result.notice = f"ANOVA not computed: {e}"
        logger.warning("%s", result.notice)
    if excluded and result.notice is None:
        result.notice = f"deterministic algorithms excluded: {', '.join(excluded)}"
    return result


def build_report(
    cfg: ExperimentConfig,
    records: List[TrialRecord],
    errors: List[CellError],
    datasets: Dict[str, DatasetSummary],
    settings: Dict[str, Dict[str, Dict[str, Any]]],
) -> ExperimentReport:
    """Aggregate per-trial records into the comparison tables.

    Every aggregate cell is the mean (or best) over the successful trials of
    that (dataset, algorithm) pair, so all of them can be recomputed from the
    per-trial table.
    """
    algorithms = [a.name for a in cfg.algorithms]
    report = ExperimentReport(
        name=cfg.experiment.name,
        trials=cfg.experiment.trials,
        base_seed=cfg.experiment.base_seed,
        algorithms=algorithms,
        datasets=datasets,
        settings=settings,
        per_trial=records,
        errors=errors,
    )

    for dataset in datasets:
        grouped: Dict[str, List[TrialRecord]] = {name: [] for name in algorithms}
        for record in records:
            if record.dataset == dataset:
                grouped[record.algorithm].append(record)

        silhouettes = {name: _samples(grouped[name], "silhouette") for name in algorithms}
        report.silhouette_table[dataset] = {name: _mean(silhouettes[name]) for name in algorithms}
        report.silhouette_best[dataset] = {
            name: (max(silhouettes[name]) if silhouettes[name] else None) for name in algorithms
        }
        report.accuracy_table[dataset] = {name: _mean(_samples(grouped[name], "accuracy")) for name in algorithms}
        report.index_tables[dataset] = {
            row: {name: _mean(_samples(grouped[name], column)) for name in algorithms}
            for row, column in INDEX_ROWS.items()
        }
        report.boxplot_data[dataset] = {
            name: (boxplot_stats(silhouettes[name]) if silhouettes[name] else None) for name in algorithms
        }
        report.anova_tables[dataset] = _anova(cfg, grouped)

    return report


def slugify(name: str) -> str:
    """File-name-safe form of a dataset name."""
    slug = re.sub(r"[^A-Za-z0-9._-]+", "-", name).strip("-").lower()
    return slug or "dataset"


def _table_frame(table: Dict[str, Dict[str, Optional[float]]], algorithms: List[str], index_name: str) -> pd.DataFrame:
    frame = pd.DataFrame.from_dict(table, orient="index", columns=algorithms)
    frame.index.name = index_name
    return frame


def _boxplot_frame(data: Dict[str, Optional[BoxplotStats]]) -> pd.DataFrame:
    rows = []
    for algorithm, stats in data.items():
        row: Dict[str, Any] = {"algorithm": algorithm}
        if stats is not None:
            row.update(stats.model_dump(exclude={"outliers"}))
            row["outliers"] = ";".join(repr(v) for v in stats.outliers)
        rows.append(row)
    return pd.DataFrame(rows, columns=["algorithm", "min", "q1", "median", "q3", "max", "n", "outliers"])


def _write_csv(frame: pd.DataFrame, path: Path, index: bool) -> Path:
    frame.to_csv(path, index=index, float_format=FLOAT_FORMAT)
    logger.info("Wrote %s", path)
    return path


def emit_report(
    r: ExperimentReport, directory: Union[str, Path], formats: Optional[Iterable[ReportFormat]] = None
) -> List[Path]:
    """Write one file per table and format.

    CSV: per_trial.csv, silhouette_table.csv, silhouette_best.csv,
    accuracy_table.csv, index_<dataset>.csv, anova_<dataset>.csv,
    boxplot_<dataset>.csv and errors.csv. JSON: report.json holding every
    table (wall-clock runtimes omitted).

    Returns:
        Paths of the written files

    Raises:
        ReportError: If the report has no trial records or a file cannot be written
    """
    if not r.per_trial:
        raise ReportError("report has no trial records; nothing written")
    formats = [ReportFormat(f) for f in (formats or [ReportFormat.CSV, ReportFormat.JSON])]
    directory = Path(directory)
    written: List[Path] = []

    try:
        directory.mkdir(parents=True, exist_ok=True)
        if ReportFormat.CSV in formats:
            per_trial = pd.DataFrame([rec.to_row() for rec in r.per_trial], columns=PER_TRIAL_COLUMNS)
            written.append(_write_csv(per_trial, directory / "per_trial.csv", index=False))
            for name, table in (
                ("silhouette_table", r.silhouette_table),
                ("silhouette_best", r.silhouette_best),
                ("accuracy_table", r.accuracy_table),
            ):
                frame = _table_frame(table, r.algorithms, "dataset")
                written.append(_write_csv(frame, directory / f"{name}.csv", True))
            for dataset in r.datasets:
                slug = slugify(dataset)
                grid = _table_frame(r.index_tables[dataset], r.algorithms, "index")
                written.append(_write_csv(grid, directory / f"index_{slug}.csv", index=True))
                anova = r.anova_tables[dataset]
                if anova.table is not None:
                    frame = pd.DataFrame(anova.table.to_rows(), columns=["Source", "SS", "df", "MS", "F", "Prob>F"])
                    written.append(_write_csv(frame, directory / f"anova_{slug}.csv", index=False))
                boxplot = _boxplot_frame(r.boxplot_data[dataset])
                written.append(_write_csv(boxplot, directory / f"boxplot_{slug}.csv", index=False))
            if r.errors:
                errors = pd.DataFrame([e.model_dump() for e in r.errors])
                written.append(_write_csv(errors, directory / "errors.csv", index=False))
        if ReportFormat.JSON in formats:
            path = directory / "report.json"
            path.write_text(r.model_dump_json(indent=2) + "\n", encoding="utf-8")
            logger.info("Wrote %s", path)
            written.append(path)
    except OSError as e:
        raise ReportError(f"cannot write report to '{directory}': {e}")

    return written
