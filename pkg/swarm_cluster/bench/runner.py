"""Experiment runner: every algorithm on every dataset for a number of seeded trials."""

import hashlib
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Tuple, Union

from ..algorithms.density_hier import dbscan_run, hierarchical_run
from ..algorithms.kmeans import kmeans_run, sse_fitness
from ..algorithms.swarm import pso_kmeans_run
from ..config.config_loader import ConfigLoader
from ..config.models import (
    AlgorithmConfig,
    AlgorithmSpec,
    DatasetSpec,
    DbscanConfig,
    ExperimentConfig,
    HierConfig,
    KMeansConfig,
    PsoConfig,
)
from ..core.dataset import Dataset, load_builtin, load_csv, make_synthetic, normalize_minmax
from ..core.partition import Partition, compute_centroids
from ..errors import DatasetError, SwarmClusterError
from ..evaluation.validity import compute_indices
from .report import CellError, DatasetSummary, ExperimentReport, TrialRecord, build_report

logger = logging.getLogger(__name__)

SEED_BITS = 64


class ClusterOutcome(NamedTuple):
    """Partition produced by one algorithm run, with its SSE fitness when defined."""

    partition: Partition
    fitness: Optional[float]
    iterations: Optional[int]


class _Cell(NamedTuple):
    dataset: Dataset
    algorithm: AlgorithmSpec
    k: int
    trial: int
    seed: int


def derive_seed(base_seed: int, dataset: str, algorithm: str, trial: int) -> int:
    """Stable 64-bit seed for one (dataset, algorithm, trial) cell."""
    key = f"{base_seed}:{dataset}:{algorithm}:{trial}".encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=SEED_BITS // 8).digest(), "big")


def materialize_dataset(spec: DatasetSpec) -> Tuple[Dataset, int]:
    """Load (or generate) a configured dataset and resolve its cluster count.

    Raises:
        DatasetError: If loading fails, or k is unset and the data has no labels
    """
    if spec.path is not None:
        dataset = load_csv(spec.path, has_header=spec.has_header, label_column=spec.label_column, name=spec.name)
    elif spec.builtin is not None:
        dataset = load_builtin(spec.builtin, name=spec.name)
    else:
        dataset = make_synthetic(spec.synthetic, name=spec.name)
    if spec.normalize:
        dataset = normalize_minmax(dataset)

    k = spec.k or dataset.n_classes
    if k is None:
        raise DatasetError(f"dataset '{spec.name}' has no labels; set k explicitly")
    return dataset, k


def partition_fitness(d: Dataset, p: Partition, cfg: AlgorithmConfig) -> Optional[float]:
    """SSE of a partition around its own cluster means, noise objects skipped."""
    keep = ~p.noise_mask
    if not keep.any():
        return None
    compact = Partition.from_labels(p.assignment[keep])
    sub = Dataset(points=d.points[keep], name=d.name)
    return sse_fitness(sub, compute_centroids(sub, compact), compact, cfg.metric)


def run_algorithm(d: Dataset, cfg: AlgorithmConfig) -> ClusterOutcome:
    """Dispatch one run on the type of its configuration."""
    if isinstance(cfg, KMeansConfig):
        result = kmeans_run(d, cfg)
        return ClusterOutcome(result.partition, result.fitness, result.iterations)
    if isinstance(cfg, PsoConfig):
        result = pso_kmeans_run(d, cfg)
        return ClusterOutcome(result.partition, result.fitness, result.iterations)
    if isinstance(cfg, DbscanConfig):
        partition = dbscan_run(d, cfg)
    elif isinstance(cfg, HierConfig):
        partition = hierarchical_run(d, cfg)
    else:
        raise TypeError(f"unsupported algorithm configuration {type(cfg).__name__}")
    return ClusterOutcome(partition, partition_fitness(d, partition, cfg), None)


def run_cell(cell: _Cell) -> Union[TrialRecord, CellError]:
    """Run and score one cell; every package error becomes a CellError."""
    stage = "config"

    def failed(e: Exception) -> CellError:
        logger.warning("%s/%s trial %d failed at %s: %s", cell.dataset.name, cell.algorithm.name, cell.trial, stage, e)
        return CellError(
            dataset=cell.dataset.name, algorithm=cell.algorithm.name, trial=cell.trial, stage=stage, message=str(e)
        )

    try:
        cfg = cell.algorithm.build_config(k=cell.k, seed=cell.seed)
        stage = "cluster"
        started = time.perf_counter()
        outcome = run_algorithm(cell.dataset, cfg)
        runtime_ms = (time.perf_counter() - started) * 1000.0
        stage = "indices"
        indices = compute_indices(cell.dataset, outcome.partition, cfg.metric)
    except (SwarmClusterError, ValueError) as e:
        return failed(e)

    return TrialRecord(
        dataset=cell.dataset.name,
        algorithm=cell.algorithm.name,
        trial=cell.trial,
        seed=cell.seed,
        indices=indices,
        fitness=outcome.fitness,
        iterations=outcome.iterations,
        runtime_ms=runtime_ms,
    )


def _summarize(spec: DatasetSpec, dataset: Dataset, k: int) -> DatasetSummary:
    return DatasetSummary(
        n_objects=dataset.n_objects,
        n_features=dataset.n_features,
        n_classes=dataset.n_classes,
        k=k,
        synthetic=spec.synthetic is not None,
    )


def _resolved_settings(spec: AlgorithmSpec, k: int) -> Dict[str, object]:
    try:
        settings = spec.build_config(k=k, seed=0).model_dump(mode="json", exclude={"seed"})
    except ValueError as e:
        return {"kind": spec.kind.value, "error": str(e)}
    return {"kind": spec.kind.value, **settings}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run the full dataset x algorithm x trial grid and aggregate the results.

    Deterministic algorithms run once per dataset; their record is replicated
    across trials and flagged. With ``workers > 1`` the cells run on a thread
    pool; results are collected in grid order either way, so the report does
    not depend on the worker count.
    """
    settings = cfg.experiment
    records: List[TrialRecord] = []
    errors: List[CellError] = []
    summaries: Dict[str, DatasetSummary] = {}
    resolved: Dict[str, Dict[str, Dict[str, object]]] = {}
    cells: List[_Cell] = []

    for dataset_spec in cfg.datasets:
        try:
            dataset, k = materialize_dataset(dataset_spec)
        except (SwarmClusterError, ValueError, OSError) as e:
            logger.warning("Dataset %s could not be loaded: %s", dataset_spec.name, e)
            errors.append(
                CellError(dataset=dataset_spec.name, algorithm=None, trial=None, stage="load", message=str(e))
            )
            continue
        summaries[dataset.name] = _summarize(dataset_spec, dataset, k)
        resolved[dataset.name] = {a.name: _resolved_settings(a, k) for a in cfg.algorithms}
        logger.info(
            "Dataset %s: %d objects, %d features, k=%d", dataset.name, dataset.n_objects, dataset.n_features, k
        )
        for algorithm in cfg.algorithms:
            runs = 1 if algorithm.kind.is_deterministic else settings.trials
            for trial in range(runs):
                seed = derive_seed(settings.base_seed, dataset.name, algorithm.name, trial)
                cells.append(_Cell(dataset, algorithm, k, trial, seed))

    logger.info("Running %d cells with %d worker(s)", len(cells), settings.workers)
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as executor:
            outcomes = list(executor.map(run_cell, cells))
    else:
        outcomes = [run_cell(cell) for cell in cells]

    for cell, outcome in zip(cells, outcomes):
        if isinstance(outcome, CellError):
            errors.append(outcome)
            continue
        records.append(outcome)
        if cell.algorithm.kind.is_deterministic:
            for trial in range(1, settings.trials):
                seed = derive_seed(settings.base_seed, cell.dataset.name, cell.algorithm.name, trial)
                records.append(outcome.model_copy(update={"trial": trial, "seed": seed, "replicated": True}))

    return build_report(cfg, records, errors, summaries, resolved)


def run_config_file(config_file: Union[str, Path], overrides: Optional[Dict] = None) -> ExperimentReport:
    """Load a YAML experiment file and run it."""
    return run_experiment(ConfigLoader(config_file).load_config(overrides))
