"""Pytest configuration and fixtures for unit tests."""

import numpy as np
import pytest

from swarm_cluster.config.models import KMeansConfig, KMeansInit, Metric
from swarm_cluster.core.dataset import Dataset
from swarm_cluster.core.partition import Partition

TOY_VALUES = [10, 12, 15, 7, 22, 29, 31, 3, 7, 5, 1, 4, 12, 11, 10]


@pytest.fixture
def toy_dataset():
    """The 15-point one-feature worked example."""
    return Dataset(points=np.asarray(TOY_VALUES, dtype=float), name="toy")


@pytest.fixture
def toy_kmeans_config():
    """Manhattan K-means seeded with centroids 10, 22, 1."""
    return KMeansConfig(
        k=3,
        metric=Metric.MANHATTAN,
        init=KMeansInit.EXPLICIT,
        initial_centroids=[[10.0], [22.0], [1.0]],
        tol=0.0,
    )


@pytest.fixture
def toy_partition():
    """Final toy clusters: {10,12,15,7,7,12,11,10}, {22,29,31}, {3,5,1,4}."""
    labels = [0, 0, 0, 0, 1, 1, 1, 2, 0, 2, 2, 2, 0, 0, 0]
    return Partition(assignment=np.asarray(labels), k=3)


@pytest.fixture
def two_blobs():
    """Two well separated Gaussian blobs of 20 points each, labeled by blob."""
    rng = np.random.default_rng(42)
    a = rng.normal(loc=0.0, scale=0.5, size=(20, 2))
    b = rng.normal(loc=10.0, scale=0.5, size=(20, 2))
    return Dataset(points=np.vstack([a, b]), labels=np.repeat(["a", "b"], 20), name="blobs")


@pytest.fixture
def rng():
    """Seeded generator for property-style tests."""
    return np.random.default_rng(12345)


@pytest.fixture
def random_instance():
    """Factory for random datasets with a complete partition of at least two clusters."""

    def make(rng, n_max=60, k_max=6, n_features=3):
        n = int(rng.integers(6, n_max + 1))
        k = int(rng.integers(2, min(k_max, n // 2) + 1))
        points = rng.normal(size=(n, n_features)) * rng.uniform(0.5, 5.0)
        labels = np.concatenate([np.arange(k), rng.integers(0, k, size=n - k)])
        rng.shuffle(labels)
        return Dataset(points=points, name="random"), Partition(assignment=labels, k=k)

    return make
