"""Unit tests for partitions, centroids and contingency tables."""

import numpy as np
import pytest

from swarm_cluster.config.models import Metric
from swarm_cluster.core.dataset import Dataset
from swarm_cluster.core.partition import (
    NOISE,
    Centroids,
    Partition,
    assign_nearest,
    compute_centroids,
    contingency,
    read_partition_csv,
    repair_empty_clusters,
)
from swarm_cluster.errors import PartitionError


class TestPartition:
    """Test Partition construction and helpers."""

    def test_rejects_out_of_range_id(self):
        """Test that ids must lie in [0, k)."""
        with pytest.raises(PartitionError, match="cluster id 3 outside"):
            Partition(assignment=[0, 1, 3], k=3)

    def test_noise_allowed(self):
        """Test that NOISE is accepted and counted."""
        p = Partition(assignment=[0, NOISE, 1, NOISE], k=2)
        assert p.noise_count == 2
        assert p.sizes().tolist() == [1, 1]
        assert not p.is_complete

    def test_empty_clusters_reported(self):
        """Test that unused ids are listed instead of raising."""
        p = Partition(assignment=[0, 0, 2], k=3)
        assert p.empty_clusters == (1,)
        with pytest.raises(PartitionError, match="empty clusters"):
            p.require_complete()

    def test_from_labels(self):
        """Test that arbitrary labels map to sorted codes with -1 kept as noise."""
        p = Partition.from_labels(["b", "a", "-1", "b"])
        assert p.assignment.tolist() == [1, 0, NOISE, 1]
        assert p.k == 2

    def test_without_noise(self):
        """Test restriction to labeled objects."""
        p, keep = Partition(assignment=[1, NOISE, 0], k=2).without_noise()
        assert p.assignment.tolist() == [1, 0]
        assert keep.tolist() == [True, False, True]

    def test_label_file_round_trip(self, tmp_path):
        """Test the single-column label file format."""
        p = Partition(assignment=[2, 0, NOISE, 1], k=3)
        path = p.to_csv(tmp_path / "labels.csv")

        assert path.read_text().split() == ["2", "0", "-1", "1"]
        assert read_partition_csv(path).assignment.tolist() == [2, 0, NOISE, 1]

    def test_label_file_two_columns(self, tmp_path):
        """Test that multi-column label files are rejected."""
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n3,4\n")
        with pytest.raises(PartitionError, match="single column"):
            read_partition_csv(path)


class TestCentroids:
    """Test centroid computation and assignment."""

    def test_compute_centroids(self, toy_dataset, toy_partition):
        """Test the toy cluster means 10.5, 27.333 and 3.25."""
        c = compute_centroids(toy_dataset, toy_partition)
        np.testing.assert_allclose(c.centers[:, 0], [10.5, 82.0 / 3.0, 3.25])

    def test_compute_centroids_needs_complete_partition(self, toy_dataset):
        """Test that noise prevents centroid computation."""
        p = Partition(assignment=[0] * 14 + [NOISE], k=1)
        with pytest.raises(PartitionError, match="noise"):
            compute_centroids(toy_dataset, p)

    def test_assign_nearest_toy_first_pass(self, toy_dataset):
        """Test the first assignment pass sizes 8/3/4 with Manhattan distance."""
        p = assign_nearest(toy_dataset, Centroids([[10.0], [22.0], [1.0]]), Metric.MANHATTAN)
        assert p.sizes().tolist() == [8, 3, 4]

    def test_ties_go_to_lowest_index(self):
        """Test that an object equidistant from two centres joins the first."""
        d = Dataset(points=[5.0])
        p = assign_nearest(d, Centroids([[0.0], [10.0]]), Metric.EUCLIDEAN)
        assert p.assignment.tolist() == [0]
        assert p.empty_clusters == (1,)

    def test_dimension_mismatch(self, toy_dataset):
        """Test that centroid width must match the dataset."""
        with pytest.raises(PartitionError, match="features"):
            assign_nearest(toy_dataset, Centroids([[1.0, 2.0]]), Metric.EUCLIDEAN)


class TestRepair:
    """Test empty-cluster re-seeding."""

    def test_repair_fills_empty_cluster(self):
        """Test that the farthest object moves into the empty cluster."""
        d = Dataset(points=[0.0, 1.0, 2.0, 9.0])
        c = Centroids([[1.0], [100.0]])
        p = assign_nearest(d, c, Metric.EUCLIDEAN)
        assert p.empty_clusters == (1,)

        repaired, centers = repair_empty_clusters(d, c, p, Metric.EUCLIDEAN)

        assert repaired.assignment.tolist() == [0, 0, 0, 1]
        assert centers.centers[1, 0] == 9.0
        assert repaired.is_complete

    def test_repair_noop(self, toy_dataset, toy_partition):
        """Test that complete partitions are returned unchanged."""
        c = compute_centroids(toy_dataset, toy_partition)
        p, centers = repair_empty_clusters(toy_dataset, c, toy_partition, Metric.MANHATTAN)
        assert p is toy_partition
        assert centers is c


class TestContingency:
    """Test contingency tables."""

    def test_counts(self):
        """Test the overlap matrix of two small labelings."""
        table = contingency(Partition(assignment=[0, 0, 1], k=2), Partition(assignment=[0, 1, 1], k=2))
        assert table.counts.tolist() == [[1, 1], [0, 1]]
        assert table.row_sizes.tolist() == [2, 1]
        assert table.col_sizes.tolist() == [1, 2]
        assert table.n == 3

    def test_length_mismatch(self):
        """Test that partitions must cover the same objects."""
        with pytest.raises(PartitionError, match="length mismatch"):
            contingency(Partition(assignment=[0], k=1), Partition(assignment=[0, 0], k=1))

    def test_transpose_swaps_arguments(self, rng):
        """Test that contingency(a, b) transposed is contingency(b, a)."""
        for _ in range(20):
            n = int(rng.integers(1, 40))
            a = Partition.from_labels(rng.integers(0, 4, size=n))
            b = Partition.from_labels(rng.integers(0, 5, size=n))

            np.testing.assert_array_equal(contingency(a, b).transposed().counts, contingency(b, a).counts)

    def test_self_table_is_diagonal(self, rng):
        """Test that a partition against itself puts all n objects on the diagonal."""
        p = Partition.from_labels(rng.integers(0, 6, size=50))
        table = contingency(p, p)

        assert int(np.trace(table.counts)) == table.n == 50
        np.testing.assert_array_equal(np.diag(table.counts), p.sizes())
