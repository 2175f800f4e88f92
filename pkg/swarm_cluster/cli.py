"""Command-line front end.

Usage:
    swarm-cluster run configs/wine.yaml --output-dir results/wine
    swarm-cluster cluster wine.csv --algo canonical-pso -k 3 --seed 1 --label-column 0
    swarm-cluster indices wine.csv labels.csv --label-column 0
    swarm-cluster toy
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from . import __version__
from .algorithms.swarm import pso_kmeans_run, write_history_csv
from .bench.report import emit_report
from .bench.runner import run_algorithm, run_experiment
from .bench.toy import format_toy, run_toy
from .config.config_loader import ConfigLoader
from .config.models import AlgorithmKind, AlgorithmSpec, BuiltinDataset, Linkage, Metric, PsoConfig
from .core.dataset import Dataset, load_builtin, load_csv, normalize_minmax
from .core.partition import read_partition_csv
from .errors import DatasetError, SwarmClusterError
from .evaluation.validity import compute_indices

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(name)s: %(message)s"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _add_dataset_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("dataset", help="CSV file, or 'wine' for the bundled UCI copy")
    parser.add_argument("--header", action="store_true", help="First row holds column names")
    parser.add_argument("--label-column", type=int, default=None, help="Zero-based class-label column")
    parser.add_argument("--normalize", action="store_true", help="Min-max scale every feature to [0, 1]")
    parser.add_argument(
        "--metric", choices=[m.value for m in Metric], default=Metric.EUCLIDEAN.value, help="Distance metric"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swarm-cluster",
        description="PSO based K-means clustering with validity indices and an ANOVA benchmark harness",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run a full experiment from a YAML config")
    run.add_argument("config", help="Experiment configuration file")
    run.add_argument("--output-dir", help="Override experiment.output_dir")
    run.add_argument("--trials", type=int, help="Override experiment.trials")
    run.add_argument("--workers", type=int, help="Override experiment.workers")
    run.add_argument("--force-anova-all", action="store_true", help="Include deterministic algorithms in ANOVA")

    cluster = commands.add_parser("cluster", help="Cluster one dataset once and print its indices")
    _add_dataset_arguments(cluster)
    cluster.add_argument("--algo", required=True, choices=[k.value for k in AlgorithmKind])
    cluster.add_argument("-k", type=int, default=None, help="Cluster count (defaults to the number of classes)")
    cluster.add_argument("--seed", type=int, default=0)
    cluster.add_argument("--max-iter", type=int, default=None)
    cluster.add_argument("--particles", type=int, default=None, help="Swarm size")
    cluster.add_argument("--refine", action="store_true", help="One Lloyd pass after every particle move")
    cluster.add_argument("--eps", type=float, default=None, help="DBSCAN neighborhood radius")
    cluster.add_argument("--minpts", type=int, default=None, help="DBSCAN core-point threshold")
    cluster.add_argument("--linkage", choices=[link.value for link in Linkage], default=None)
    cluster.add_argument("--labels-out", type=Path, default=None, help="Write the cluster labels to this file")
    cluster.add_argument("--history-out", type=Path, default=None, help="Write the PSO fitness history CSV")

    indices = commands.add_parser("indices", help="Score an external labeling of a dataset")
    _add_dataset_arguments(indices)
    indices.add_argument("labels", help="Single-column label file (-1 marks noise)")

    commands.add_parser("toy", help="Run the 15-point worked example")
    return parser


def _check_pso_flags(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    """PSO-only cluster options are a usage error with any other algorithm."""
    if args.command != "cluster" or AlgorithmKind(args.algo) in (AlgorithmKind.SIMPLE_PSO, AlgorithmKind.CANONICAL_PSO):
        return
    flags = (("--particles", args.particles), ("--refine", args.refine), ("--history-out", args.history_out))
    given = [flag for flag, value in flags if value not in (None, False)]
    if given:
        parser.error(f"{', '.join(given)} only apply to simple-pso and canonical-pso, not '{args.algo}'")


def _load_dataset(args: argparse.Namespace) -> Dataset:
    path = Path(args.dataset)
    if not path.exists() and args.dataset in {b.value for b in BuiltinDataset}:
        dataset = load_builtin(args.dataset)
    else:
        dataset = load_csv(path, has_header=args.header, label_column=args.label_column)
    return normalize_minmax(dataset) if args.normalize else dataset


def _algorithm_params(args: argparse.Namespace) -> Dict[str, Any]:
    kind = AlgorithmKind(args.algo)
    params: Dict[str, Any] = {"metric": args.metric}
    if kind == AlgorithmKind.DBSCAN:
        params.update({key: value for key, value in (("eps", args.eps), ("minpts", args.minpts)) if value is not None})
        return params
    if args.k is not None:
        params["k"] = args.k
    if kind == AlgorithmKind.HIERARCHICAL:
        if args.linkage:
            params["linkage"] = args.linkage
        return params
    if args.max_iter is not None:
        params["max_iter"] = args.max_iter
    if kind in (AlgorithmKind.SIMPLE_PSO, AlgorithmKind.CANONICAL_PSO):
        if args.particles is not None:
            params["n_particles"] = args.particles
        params["kmeans_refine"] = args.refine
    return params


def _print_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2))


def cmd_run(args: argparse.Namespace) -> int:
    overrides: Dict[str, Any] = {}
    if args.output_dir:
        overrides["output_dir"] = args.output_dir
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.workers is not None:
        overrides["workers"] = args.workers
    if args.force_anova_all:
        overrides["force_anova_all"] = True

    config = ConfigLoader(args.config).load_config(overrides or None)
    report = run_experiment(config)
    written = emit_report(report, config.experiment.output_dir, config.experiment.report_formats)

    table = pd.DataFrame.from_dict(report.silhouette_table, orient="index", columns=report.algorithms)
    print("Mean silhouette")
    print(table.to_string(float_format=lambda v: f"{v:.4f}", na_rep="-"))
    for dataset, anova in report.anova_tables.items():
        if anova.table is not None:
            print(f"ANOVA {dataset}: F={anova.table.f:.4g}, Prob>F={anova.table.prob_gt_f:.4g}")
        if anova.notice:
            print(f"ANOVA {dataset}: {anova.notice}")
    if report.errors:
        print(f"{len(report.errors)} cell(s) failed; see errors.csv", file=sys.stderr)
    print(f"Wrote {len(written)} file(s) to {config.experiment.output_dir}")
    return EXIT_OK


def cmd_cluster(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args)
    spec = AlgorithmSpec(name=args.algo, kind=args.algo, params=_algorithm_params(args))
    k = args.k or dataset.n_classes
    if k is None and spec.kind != AlgorithmKind.DBSCAN:
        raise DatasetError(f"dataset '{dataset.name}' has no labels; pass -k")
    cfg = spec.build_config(k=k or 1, seed=args.seed)

    if args.history_out and isinstance(cfg, PsoConfig):
        result = pso_kmeans_run(dataset, cfg)
        write_history_csv(result.history, args.history_out)
        partition, fitness, iterations = result.partition, result.fitness, result.iterations
    else:
        partition, fitness, iterations = run_algorithm(dataset, cfg)
    if args.labels_out:
        partition.to_csv(args.labels_out)

    report = compute_indices(dataset, partition, cfg.metric)
    _print_json(
        {
            "dataset": dataset.name,
            "algorithm": spec.kind.value,
            "settings": cfg.model_dump(mode="json"),
            "fitness": fitness,
            "iterations": iterations,
            "indices": report.model_dump(mode="json"),
        }
    )
    return EXIT_OK


def cmd_indices(args: argparse.Namespace) -> int:
    dataset = _load_dataset(args)
    partition = read_partition_csv(args.labels)
    report = compute_indices(dataset, partition, Metric(args.metric))
    _print_json({"dataset": dataset.name, "labels": str(args.labels), "indices": report.model_dump(mode="json")})
    return EXIT_OK


def cmd_toy(args: argparse.Namespace) -> int:
    print(format_toy(run_toy()))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "cluster": cmd_cluster, "indices": cmd_indices, "toy": cmd_toy}


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code (0 ok, 1 runtime error, 2 usage error)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _check_pso_flags(parser, args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)

    try:
        return COMMANDS[args.command](args)
    except (SwarmClusterError, ValueError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
