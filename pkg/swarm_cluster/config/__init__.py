"""Configuration management for swarm-cluster experiments."""

from .config_loader import ConfigLoader, get_config
from .models import (
    AlgorithmKind,
    AlgorithmSpec,
    DatasetSpec,
    DbscanConfig,
    ExperimentConfig,
    ExperimentSettings,
    HierConfig,
    KMeansConfig,
    KMeansInit,
    Linkage,
    Metric,
    PsoConfig,
    PsoVariant,
    RandomScaling,
    ReportFormat,
    SyntheticSpec,
)

__all__ = [
    "ConfigLoader",
    "get_config",
    "Metric",
    "Linkage",
    "KMeansInit",
    "PsoVariant",
    "RandomScaling",
    "AlgorithmKind",
    "ReportFormat",
    "KMeansConfig",
    "PsoConfig",
    "DbscanConfig",
    "HierConfig",
    "SyntheticSpec",
    "DatasetSpec",
    "AlgorithmSpec",
    "ExperimentSettings",
    "ExperimentConfig",
]
