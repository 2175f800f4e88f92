"""Benchmark harness: seeded experiment runs, comparison reports and the worked example."""

from .report import (
    AnovaResult,
    CellError,
    DatasetSummary,
    ExperimentReport,
    TrialRecord,
    build_report,
    emit_report,
)
from .runner import derive_seed, materialize_dataset, run_algorithm, run_config_file, run_experiment
from .toy import ToyReport, format_toy, run_toy

__all__ = [
    "TrialRecord",
    "CellError",
    "DatasetSummary",
    "AnovaResult",
    "ExperimentReport",
    "build_report",
    "emit_report",
    "derive_seed",
    "materialize_dataset",
    "run_algorithm",
    "run_experiment",
    "run_config_file",
    "ToyReport",
    "run_toy",
    "format_toy",
]
