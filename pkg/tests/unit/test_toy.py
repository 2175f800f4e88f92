"""Unit tests for the worked example report."""

import numpy as np
import pytest

from swarm_cluster.bench.toy import format_toy, run_toy


@pytest.fixture(scope="module")
def toy_report():
    """Worked example, computed once."""
    return run_toy()


class TestRunToy:
    """Test the worked example tables."""

    def test_first_pass(self, toy_report):
        """Test the first distance table and the 8/3/4 split."""
        table = toy_report.iteration_tables[0]

        assert toy_report.first_sizes == [8, 3, 4]
        assert list(table.columns) == ["value", "C1", "C2", "C3", "cluster"]
        assert table.index.name == "object"
        assert table.loc[1, "C2"] == 12.0
        assert table.loc[5, "cluster"] == 2

    def test_second_pass_centroids(self, toy_report):
        """Test the centroids entering the second pass."""
        np.testing.assert_allclose(toy_report.iteration_centroids[1][:, 0], [10.5, 82.0 / 3.0, 3.25])
        assert toy_report.result.iterations == 2

    def test_indices(self, toy_report):
        """Test the Davies-Bouldin and Dunn diagnostics."""
        assert toy_report.db_value == pytest.approx(61.0 / 108.0)
        assert toy_report.dunn_value == pytest.approx(2.0 / 9.0)
        assert toy_report.dunn_table[0, 2] == pytest.approx(0.25)


class TestFormatToy:
    """Test the text rendering."""

    def test_contents(self, toy_report):
        """Test the lines a reader checks against the hand calculation."""
        text = format_toy(toy_report)

        assert "Number of items: C1=8, C2=3, C3=4" in text
        assert "centroids 10.500, 27.333, 3.250" in text
        assert "Davies-Bouldin index: 0.5648" in text
        assert "Dunn index: 0.2222" in text
