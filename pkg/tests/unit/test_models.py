"""Unit tests for configuration models."""

import pytest
from pydantic import ValidationError

from swarm_cluster.config.models import (
    AlgorithmKind,
    AlgorithmSpec,
    DbscanConfig,
    HierConfig,
    KMeansConfig,
    KMeansInit,
    Linkage,
    PsoConfig,
    PsoVariant,
    SyntheticSpec,
)


class TestKMeansConfig:
    """Test K-means configuration validation."""

    def test_defaults(self):
        """Test default values."""
        cfg = KMeansConfig(k=3)
        assert cfg.max_iter == 300
        assert cfg.init == KMeansInit.RANDOM_POINTS

    def test_k_must_be_positive(self):
        """Test that k >= 1 is enforced."""
        with pytest.raises(ValidationError):
            KMeansConfig(k=0)

    def test_explicit_init_requires_centroids(self):
        """Test that explicit init needs initial centroids."""
        with pytest.raises(ValidationError, match="initial_centroids required"):
            KMeansConfig(k=2, init="explicit")

    def test_explicit_init_row_count(self):
        """Test that the number of initial centroids must equal k."""
        with pytest.raises(ValidationError, match="expected k=3"):
            KMeansConfig(k=3, init="explicit", initial_centroids=[[1.0], [2.0]])

    def test_seed_range(self):
        """Test that seeds are limited to 64 bits."""
        KMeansConfig(k=1, seed=2**64 - 1)
        with pytest.raises(ValidationError):
            KMeansConfig(k=1, seed=2**64)


class TestPsoConfig:
    """Test PSO configuration validation."""

    def test_canonical_defaults(self):
        """Test canonical defaults c1 = c2 = 2.05 with chi derived later."""
        cfg = PsoConfig(k=3)
        assert cfg.variant == PsoVariant.CANONICAL
        assert (cfg.c1, cfg.c2) == (2.05, 2.05)
        assert cfg.chi is None

    def test_simple_defaults(self):
        """Test simple defaults c1 = c2 = 2.0."""
        cfg = PsoConfig(k=3, variant="simple")
        assert (cfg.c1, cfg.c2) == (2.0, 2.0)

    @pytest.mark.parametrize("chi", [0.0, -0.5, 1.5])
    def test_chi_range(self, chi):
        """Test that chi must lie in (0, 1]."""
        with pytest.raises(ValidationError, match="chi must be in"):
            PsoConfig(k=2, chi=chi)

    def test_canonical_without_chi_needs_phi_above_four(self):
        """Test that chi cannot be derived when c1 + c2 <= 4."""
        with pytest.raises(ValidationError, match="c1 \\+ c2 > 4"):
            PsoConfig(k=2, c1=2.0, c2=2.0)

    def test_canonical_with_explicit_chi(self):
        """Test that an explicit chi lifts the c1 + c2 restriction."""
        cfg = PsoConfig(k=2, c1=0.0, c2=0.0, chi=1.0)
        assert cfg.chi == 1.0


class TestOtherConfigs:
    """Test DBSCAN, hierarchical and synthetic configs."""

    def test_dbscan_bounds(self):
        """Test eps > 0 and minpts >= 1."""
        DbscanConfig(eps=25.0, minpts=65)
        with pytest.raises(ValidationError):
            DbscanConfig(eps=0.0, minpts=3)
        with pytest.raises(ValidationError):
            DbscanConfig(eps=1.0, minpts=0)

    def test_hier_default_linkage(self):
        """Test that average linkage is the default."""
        assert HierConfig(k=2).linkage == Linkage.AVERAGE

    def test_synthetic_center_box(self):
        """Test that the centre box must be non-empty."""
        with pytest.raises(ValidationError, match="center_high"):
            SyntheticSpec(center_low=5.0, center_high=5.0)


class TestAlgorithmSpec:
    """Test algorithm spec dispatch."""

    @pytest.mark.parametrize(
        "kind,expected",
        [
            ("kmeans", KMeansConfig),
            ("simple-pso", PsoConfig),
            ("canonical-pso", PsoConfig),
            ("hierarchical", HierConfig),
        ],
    )
    def test_build_config_type(self, kind, expected):
        """Test that each kind builds its module config."""
        spec = AlgorithmSpec(name=kind, kind=kind)
        assert isinstance(spec.build_config(k=4, seed=1), expected)

    def test_dbscan_ignores_k(self):
        """Test that DBSCAN configs carry no k."""
        spec = AlgorithmSpec(name="db", kind="dbscan", params={"eps": 1.0, "minpts": 2})
        assert spec.build_config(k=4, seed=1) == DbscanConfig(eps=1.0, minpts=2)

    def test_variant_follows_kind(self):
        """Test that the PSO variant cannot contradict the kind."""
        spec = AlgorithmSpec(name="s", kind="simple-pso")
        assert spec.build_config(k=2, seed=0).variant == PsoVariant.SIMPLE

    def test_deterministic_kinds(self):
        """Test which algorithms are flagged deterministic."""
        assert AlgorithmKind.DBSCAN.is_deterministic
        assert AlgorithmKind.HIERARCHICAL.is_deterministic
        assert not AlgorithmKind.KMEANS.is_deterministic
        assert not AlgorithmKind.CANONICAL_PSO.is_deterministic

    def test_invalid_params(self):
        """Test that invalid params fail at spec construction."""
        with pytest.raises(ValidationError, match="invalid params for algorithm 'db'"):
            AlgorithmSpec(name="db", kind="dbscan", params={"eps": 1.0})
