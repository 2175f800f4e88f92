"""Fixtures for end-to-end experiment tests."""

import pytest
import yaml

from swarm_cluster.config.models import ExperimentConfig


@pytest.fixture
def experiment_data(tmp_path):
    """Small four-algorithm experiment on a synthetic two-blob dataset."""
    return {
        "experiment": {
            "name": "integration",
            "trials": 3,
            "base_seed": 20140101,
            "output_dir": str(tmp_path / "results"),
            "workers": 1,
        },
        "datasets": [
            {
                "name": "blobs",
                "synthetic": {
                    "n_objects": 40,
                    "n_features": 2,
                    "n_classes": 2,
                    "cluster_std": 1.0,
                    "center_low": 0.0,
                    "center_high": 500.0,
                    "seed": 3,
                },
            }
        ],
        "algorithms": [
            {"name": "km", "kind": "kmeans", "params": {"max_iter": 50}},
            {"name": "cpso", "kind": "canonical-pso", "params": {"n_particles": 4, "max_iter": 10}},
            {"name": "dbscan", "kind": "dbscan", "params": {"eps": 3.0, "minpts": 3}},
            {"name": "hier", "kind": "hierarchical", "params": {"linkage": "average"}},
        ],
    }


@pytest.fixture
def experiment_config(experiment_data):
    """Validated form of ``experiment_data``."""
    return ExperimentConfig(**experiment_data)


@pytest.fixture
def experiment_file(tmp_path, experiment_data):
    """``experiment_data`` written as YAML."""
    config_file = tmp_path / "experiment.yaml"
    with open(config_file, "w") as f:
        yaml.dump(experiment_data, f)
    return config_file
