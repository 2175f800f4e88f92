"""Unit tests for cluster validity indices."""

import itertools
import math

import numpy as np
import pytest
from sklearn.metrics import davies_bouldin_score, rand_score, silhouette_samples

from swarm_cluster.config.models import Metric
from swarm_cluster.core.dataset import Dataset
from swarm_cluster.core.partition import NOISE, Centroids, Partition
from swarm_cluster.errors import ValidityError
from swarm_cluster.evaluation.validity import (
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

TOY_CENTROIDS = Centroids([[10.0], [22.0], [1.0]])


class TestSilhouette:
    """Test silhouette widths."""

    def test_hand_example(self):
        """Test two tight pairs far apart."""
        d = Dataset(points=[0.0, 1.0, 10.0, 11.0])
        overall, per_sample, per_cluster = silhouette(d, Partition(assignment=[0, 0, 1, 1], k=2), Metric.EUCLIDEAN)

        np.testing.assert_allclose(per_sample, [9.5 / 10.5, 8.5 / 9.5, 8.5 / 9.5, 9.5 / 10.5])
        assert overall == pytest.approx(np.mean(per_sample))
        np.testing.assert_allclose(per_cluster, [overall, overall])

    def test_singleton_scores_zero(self):
        """Test that an object alone in its cluster gets width 0."""
        d = Dataset(points=[0.0, 1.0, 10.0])
        _, per_sample, _ = silhouette(d, Partition(assignment=[0, 0, 1], k=2), Metric.EUCLIDEAN)
        assert per_sample[2] == 0.0

    def test_single_cluster(self):
        """Test that one cluster is rejected."""
        d = Dataset(points=[0.0, 1.0, 2.0])
        with pytest.raises(ValidityError, match="at least 2 clusters"):
            silhouette(d, Partition(assignment=[0, 0, 0], k=1), Metric.EUCLIDEAN)

    def test_matches_sklearn(self, rng, random_instance):
        """Test per-object widths against scikit-learn."""
        for _ in range(10):
            d, p = random_instance(rng)
            _, per_sample, _ = silhouette(d, p, Metric.EUCLIDEAN)
            np.testing.assert_allclose(per_sample, silhouette_samples(d.points, p.assignment), atol=1e-12)

    def test_bounds(self, rng, random_instance):
        """Test that every width lies in [-1, 1]."""
        for metric in Metric:
            d, p = random_instance(rng)
            _, per_sample, _ = silhouette(d, p, metric)
            assert np.all((per_sample >= -1.0) & (per_sample <= 1.0))


class TestDaviesBouldin:
    """Test the Davies-Bouldin index."""

    def test_toy_ratios(self, toy_dataset, toy_partition):
        """Test the ratio table around the initial centroids 10, 22, 1."""
        ratios = davies_bouldin_ratios(toy_dataset, toy_partition, Metric.MANHATTAN, TOY_CENTROIDS)

        assert np.isnan(np.diag(ratios)).all()
        assert ratios[0, 1] == pytest.approx(11.0 / 18.0)
        assert ratios[0, 2] == pytest.approx(17.0 / 36.0)
        assert ratios[1, 2] == pytest.approx(13.0 / 36.0)
        np.testing.assert_allclose(ratios, ratios.T)

    def test_toy_value(self, toy_dataset, toy_partition):
        """Test DB = 61/108 exactly; 0.5633 is the mean of the worst ratios rounded to two decimals."""
        db = davies_bouldin(toy_dataset, toy_partition, Metric.MANHATTAN, TOY_CENTROIDS)
        ratios = davies_bouldin_ratios(toy_dataset, toy_partition, Metric.MANHATTAN, TOY_CENTROIDS)
        rounded_worst = np.round(np.nanmax(ratios, axis=1), 2)

        assert db == pytest.approx(61.0 / 108.0, abs=1e-12)
        np.testing.assert_allclose(rounded_worst, [0.61, 0.61, 0.47])
        assert rounded_worst.mean() == pytest.approx(0.5633, abs=1e-4)

    def test_matches_sklearn(self, rng, random_instance):
        """Test the mean-centred euclidean index against scikit-learn.

        scikit-learn accumulates in lower precision, so agreement is only to about 1e-8.
        """
        for _ in range(10):
            d, p = random_instance(rng)
            expected = davies_bouldin_score(d.points, p.assignment)
            assert davies_bouldin(d, p, Metric.EUCLIDEAN) == pytest.approx(expected, rel=1e-6)

    def test_coincident_centroids(self):
        """Test that identical centres are reported instead of dividing by zero."""
        d = Dataset(points=[0.0, 2.0, 1.0, 1.0])
        with pytest.raises(ValidityError, match="clusters 0 and 1 have coincident centroids"):
            davies_bouldin(d, Partition(assignment=[0, 0, 1, 1], k=2), Metric.EUCLIDEAN)

    def test_empty_cluster(self):
        """Test that an empty cluster is rejected."""
        d = Dataset(points=[0.0, 1.0, 5.0])
        with pytest.raises(ValidityError, match="empty clusters"):
            davies_bouldin(d, Partition(assignment=[0, 0, 2], k=3), Metric.EUCLIDEAN)


class TestDunn:
    """Test the Dunn index."""

    def test_toy_table(self, toy_dataset, toy_partition):
        """Test the directed ratio table of the final toy clusters."""
        table = dunn_ratio_table(toy_dataset, toy_partition, Metric.MANHATTAN)

        expected = np.array(
            [
                [np.nan, 7.0 / 8.0, 2.0 / 8.0],
                [7.0 / 9.0, np.nan, 17.0 / 9.0],
                [2.0 / 4.0, 17.0 / 4.0, np.nan],
            ]
        )
        np.testing.assert_allclose(table, expected)

    def test_toy_value(self, toy_dataset, toy_partition):
        """Test Dunn = 2/9: closest clusters 2 apart, widest diameter 9."""
        assert dunn(toy_dataset, toy_partition, Metric.MANHATTAN) == pytest.approx(2.0 / 9.0)

    def test_brute_force(self, rng, random_instance):
        """Test against a direct double loop over object pairs."""
        for _ in range(5):
            d, p = random_instance(rng, n_max=25)
            labels = p.assignment
            inter, diameter = np.inf, 0.0
            for i in range(d.n_objects):
                for j in range(i + 1, d.n_objects):
                    dist = float(np.linalg.norm(d.points[i] - d.points[j]))
                    if labels[i] == labels[j]:
                        diameter = max(diameter, dist)
                    else:
                        inter = min(inter, dist)
            assert dunn(d, p, Metric.EUCLIDEAN) == pytest.approx(inter / diameter)

    def test_zero_diameters(self):
        """Test that all-singleton clusters leave Dunn undefined."""
        d = Dataset(points=[0.0, 5.0])
        with pytest.raises(ValidityError, match="zero diameter"):
            dunn(d, Partition(assignment=[0, 1], k=2), Metric.EUCLIDEAN)

    def test_zero_diameter_row(self):
        """Test that a singleton's row in the ratio table is NaN."""
        d = Dataset(points=[0.0, 1.0, 5.0])
        table = dunn_ratio_table(d, Partition(assignment=[0, 0, 1], k=2), Metric.EUCLIDEAN)
        assert table[0, 1] == pytest.approx(4.0)
        assert np.isnan(table[1]).all()


class TestExternalIndices:
    """Test Rand, Mirkin and accuracy."""

    def test_rand_hand_example(self):
        """Test [0,0,1] against [0,1,1]: one agreeing pair of three."""
        assert rand_index([0, 0, 1], [0, 1, 1]) == pytest.approx(1.0 / 3.0)

    def test_mirkin_hand_example(self):
        """Test raw 4 and normalized 4/9."""
        raw, normalized = mirkin([0, 0, 1], [0, 1, 1])
        assert raw == 4
        assert normalized == pytest.approx(4.0 / 9.0)

    def test_identical_labelings(self):
        """Test perfect agreement under relabeling."""
        assert rand_index(["x", "x", "y"], [5, 5, 2]) == 1.0
        assert mirkin(["x", "x", "y"], [5, 5, 2]) == (0, 0.0)

    def test_rand_needs_two_objects(self):
        """Test that a single object has no pairs."""
        with pytest.raises(ValidityError, match="at least 2 objects"):
            rand_index([0], [0])

    def test_length_mismatch(self):
        """Test that labelings must have equal length."""
        with pytest.raises(ValidityError, match="length mismatch"):
            mirkin([0, 1], [0, 1, 1])

    def test_rand_matches_sklearn_and_mirkin(self, rng):
        """Test Rand against scikit-learn and the identity raw Mirkin = n(n-1)(1-R)."""
        for _ in range(20):
            n = int(rng.integers(2, 80))
            a = rng.integers(0, int(rng.integers(1, 6)), size=n)
            b = rng.integers(0, int(rng.integers(1, 6)), size=n)

            r = rand_index(a, b)
            raw, _ = mirkin(a, b)

            assert r == pytest.approx(rand_score(a, b))
            assert raw == pytest.approx(n * (n - 1) * (1.0 - r))

    def test_accuracy_hand_example(self):
        """Test three of four objects matched."""
        assert accuracy(Partition(assignment=[0, 0, 0, 1], k=2), ["A", "A", "B", "B"]) == pytest.approx(0.75)

    def test_accuracy_single_cluster(self):
        """Test one cluster against two balanced classes."""
        assert accuracy(Partition(assignment=[0, 0, 0, 0], k=1), ["A", "A", "B", "B"]) == pytest.approx(0.5)

    def test_accuracy_counts_noise_wrong(self):
        """Test that noise objects never count as correct."""
        p = Partition(assignment=[0, 0, NOISE, 1], k=2)
        assert accuracy(p, ["A", "A", "B", "B"]) == pytest.approx(0.75)

    def test_accuracy_brute_force(self, rng):
        """Test the assignment solver against all cluster-to-class permutations."""
        for _ in range(10):
            n = int(rng.integers(5, 40))
            k = int(rng.integers(1, 5))
            pred = rng.integers(0, k, size=n)
            truth = rng.integers(0, 4, size=n)
            best = 0
            for perm in itertools.permutations(range(max(k, 4)), k):
                best = max(best, sum(int(perm[c] == t) for c, t in zip(pred, truth)))
            assert accuracy(Partition(assignment=pred, k=k), truth) == pytest.approx(best / n)

    def test_accuracy_needs_truth(self):
        """Test that missing ground truth is rejected."""
        with pytest.raises(ValidityError, match="ground-truth"):
            accuracy(Partition(assignment=[0], k=1), None)


def _dist(u, v, metric):
    diffs = [float(x) - float(y) for x, y in zip(u, v)]
    if metric == Metric.MANHATTAN:
        return math.fsum(abs(x) for x in diffs)
    squared = math.fsum(x * x for x in diffs)
    return squared if metric == Metric.SQUARED_EUCLIDEAN else math.sqrt(squared)


def _members(labels, k):
    return [[i for i, c in enumerate(labels) if c == cluster] for cluster in range(k)]


def _silhouette_by_definition(points, labels, k, metric):
    groups = _members(labels, k)
    widths = []
    for i, own in enumerate(labels):
        if len(groups[own]) == 1:
            widths.append(0.0)
            continue
        a = math.fsum(_dist(points[i], points[j], metric) for j in groups[own] if j != i) / (len(groups[own]) - 1)
        b = min(
            math.fsum(_dist(points[i], points[j], metric) for j in groups[c]) / len(groups[c])
            for c in range(k)
            if c != own
        )
        widths.append((b - a) / max(a, b) if max(a, b) > 0 else 0.0)
    return widths


def _davies_bouldin_by_definition(points, labels, k, metric):
    groups = _members(labels, k)
    dims = len(points[0])
    centres = [[math.fsum(points[i][f] for i in g) / len(g) for f in range(dims)] for g in groups]
    scatter = [math.fsum(_dist(points[i], centres[c], metric) for i in g) / len(g) for c, g in enumerate(groups)]
    worst = [
        max((scatter[i] + scatter[j]) / _dist(centres[i], centres[j], metric) for j in range(k) if j != i)
        for i in range(k)
    ]
    return math.fsum(worst) / k


def _dunn_by_definition(points, labels, metric):
    inter, diameter = math.inf, 0.0
    for i in range(len(labels)):
        for j in range(i + 1, len(labels)):
            dist = _dist(points[i], points[j], metric)
            if labels[i] == labels[j]:
                diameter = max(diameter, dist)
            else:
                inter = min(inter, dist)
    return inter / diameter


def _pair_agreement(a, b):
    agree = disagree = 0
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            if (a[i] == a[j]) == (b[i] == b[j]):
                agree += 1
            else:
                disagree += 1
    return agree, disagree


class TestDefinitionOracles:
    """Test every index against a direct evaluation of its definition on random instances."""

    METRICS = [Metric.EUCLIDEAN, Metric.MANHATTAN, Metric.SQUARED_EUCLIDEAN]

    @pytest.mark.parametrize("metric", METRICS)
    def test_internal_indices(self, rng, random_instance, metric):
        """Test silhouette, Davies-Bouldin and Dunn over 200 instances."""
        for _ in range(200):
            d, p = random_instance(rng, n_max=30)
            points = d.points.tolist()
            labels = p.assignment.tolist()

            overall, per_sample, _ = silhouette(d, p, metric)
            widths = _silhouette_by_definition(points, labels, p.k, metric)
            np.testing.assert_allclose(per_sample, widths, rtol=0.0, atol=1e-10)
            assert overall == pytest.approx(math.fsum(widths) / len(widths), abs=1e-10)

            expected_db = _davies_bouldin_by_definition(points, labels, p.k, metric)
            assert davies_bouldin(d, p, metric) == pytest.approx(expected_db, rel=1e-10)
            assert dunn(d, p, metric) == pytest.approx(_dunn_by_definition(points, labels, metric), rel=1e-10)

    def test_external_indices(self, rng):
        """Test Rand over 200 labeling pairs and the Mirkin pair identities in exact integers."""
        for _ in range(200):
            n = int(rng.integers(2, 60))
            a = rng.integers(0, int(rng.integers(1, 6)), size=n).tolist()
            b = rng.integers(0, int(rng.integers(1, 6)), size=n).tolist()
            agree, disagree = _pair_agreement(a, b)

            r = rand_index(a, b)
            raw, normalized = mirkin(a, b)

            assert r == pytest.approx(agree / (n * (n - 1) // 2), abs=1e-12)
            assert raw == n * (n - 1) - 2 * agree
            assert raw == 2 * disagree
            assert raw == pytest.approx(n * (n - 1) * (1.0 - r), abs=1e-9)
            assert normalized == raw / (n * n)


class TestInvariances:
    """Test symmetries the indices must respect."""

    def test_rand_symmetric_and_label_blind(self, rng):
        """Test Rand and Mirkin under argument swap and label permutation."""
        for _ in range(50):
            n = int(rng.integers(2, 50))
            a = rng.integers(0, 4, size=n)
            b = rng.integers(0, 4, size=n)
            renamed = rng.permutation(4)[a]

            assert rand_index(a, b) == rand_index(b, a)
            assert rand_index(renamed, b) == rand_index(a, b)
            assert mirkin(a, b) == mirkin(b, a)
            assert mirkin(renamed, b) == mirkin(a, b)

    def test_silhouette_label_blind(self, rng, random_instance):
        """Test that renaming clusters keeps every width."""
        for _ in range(20):
            d, p = random_instance(rng)
            renamed = Partition(assignment=rng.permutation(p.k)[p.assignment], k=p.k)

            overall, per_sample, _ = silhouette(d, p, Metric.EUCLIDEAN)
            overall_renamed, per_sample_renamed, _ = silhouette(d, renamed, Metric.EUCLIDEAN)

            np.testing.assert_allclose(per_sample_renamed, per_sample, rtol=0.0, atol=1e-12)
            assert overall_renamed == pytest.approx(overall, abs=1e-12)

    def test_translation_and_scaling(self, rng, random_instance):
        """Test that Davies-Bouldin and Dunn ignore shifts and positive scaling."""
        for _ in range(20):
            d, p = random_instance(rng)
            shift = rng.normal(size=d.n_features) * 100.0
            factor = float(rng.uniform(0.01, 50.0))
            moved = Dataset(points=d.points * factor + shift)

            assert davies_bouldin(moved, p, Metric.EUCLIDEAN) == pytest.approx(
                davies_bouldin(d, p, Metric.EUCLIDEAN), rel=1e-9
            )
            assert dunn(moved, p, Metric.EUCLIDEAN) == pytest.approx(dunn(d, p, Metric.EUCLIDEAN), rel=1e-9)

    def test_coincident_clusters_score_zero(self):
        """Test that a = b = 0 gives a zero width for every object."""
        d = Dataset(points=[5.0, 5.0, 5.0, 5.0])
        overall, per_sample, per_cluster = silhouette(d, Partition(assignment=[0, 0, 1, 1], k=2), Metric.EUCLIDEAN)

        assert overall == 0.0
        np.testing.assert_array_equal(per_sample, np.zeros(4))
        np.testing.assert_array_equal(per_cluster, np.zeros(2))


class TestComputeIndices:
    """Test the combined index report."""

    def test_perfect_partition(self, two_blobs):
        """Test every index on the true blob labeling."""
        report = compute_indices(two_blobs, Partition.from_labels(two_blobs.labels), Metric.EUCLIDEAN)

        assert isinstance(report, IndexReport)
        assert report.rand == 1.0
        assert report.mirkin_raw == 0
        assert report.accuracy == 1.0
        assert report.silhouette_overall > 0.8
        assert report.n_clusters == 2
        assert report.errors == {}

    def test_noise_excluded(self, two_blobs):
        """Test that noise objects are dropped and counted."""
        labels = Partition.from_labels(two_blobs.labels).assignment.copy()
        labels[[0, 25]] = NOISE
        p = Partition(assignment=labels, k=2)

        report = compute_indices(two_blobs, p, Metric.EUCLIDEAN)

        keep = labels != NOISE
        sub = Dataset(points=two_blobs.points[keep])
        expected, _, _ = silhouette(sub, Partition(assignment=labels[keep], k=2), Metric.EUCLIDEAN)
        assert report.excluded_noise == 2
        assert report.silhouette_overall == pytest.approx(expected)
        assert report.rand == 1.0
        assert report.accuracy == pytest.approx(38.0 / 40.0)

    def test_single_cluster_errors(self, two_blobs):
        """Test that internal index failures are collected, not raised."""
        report = compute_indices(two_blobs, Partition(assignment=[0] * 40, k=1), Metric.EUCLIDEAN)

        assert report.silhouette_overall is None
        assert set(report.errors) == {"silhouette", "db", "dunn"}
        assert report.accuracy == pytest.approx(0.5)

    def test_all_noise(self, two_blobs):
        """Test a partition with nothing clustered."""
        report = compute_indices(two_blobs, Partition(assignment=[NOISE] * 40, k=0), Metric.EUCLIDEAN)

        assert report.errors == {"internal": "every object is noise"}
        assert report.excluded_noise == 40

    def test_without_labels(self, toy_dataset, toy_partition):
        """Test that external indices stay empty without ground truth."""
        report = compute_indices(toy_dataset, toy_partition, Metric.MANHATTAN)

        assert report.rand is None
        assert report.accuracy is None
        assert report.dunn == pytest.approx(2.0 / 9.0)

    def test_to_row(self, toy_dataset, toy_partition):
        """Test the flat per-trial row keys."""
        row = compute_indices(toy_dataset, toy_partition, Metric.MANHATTAN).to_row()
        assert list(row) == ["silhouette", "db", "dunn", "rand", "mirkin_norm", "accuracy", "excluded_noise"]
