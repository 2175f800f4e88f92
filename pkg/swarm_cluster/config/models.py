"""Pydantic models for algorithm and experiment configuration."""

from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

SEED_LIMIT = 2**64


class Metric(str, Enum):
    """Supported distance metrics."""

    EUCLIDEAN = "euclidean"
    SQUARED_EUCLIDEAN = "squared_euclidean"
    MANHATTAN = "manhattan"


class Linkage(str, Enum):
    """Agglomerative linkage rules."""

    SINGLE = "single"
    COMPLETE = "complete"
    AVERAGE = "average"


class KMeansInit(str, Enum):
    """K-means seeding strategies."""

    RANDOM_POINTS = "random_points"
    EXPLICIT = "explicit"


class PsoVariant(str, Enum):
    """Velocity update rule used by the swarm."""

    SIMPLE = "simple"
    CANONICAL = "canonical"


class RandomScaling(str, Enum):
    """Granularity of the r1/r2 draws in the velocity update."""

    PER_PARTICLE = "per_particle"
    PER_COORDINATE = "per_coordinate"


class AlgorithmKind(str, Enum):
    """Clustering algorithms the bench harness can run."""

    KMEANS = "kmeans"
    DBSCAN = "dbscan"
    HIERARCHICAL = "hierarchical"
    SIMPLE_PSO = "simple-pso"
    CANONICAL_PSO = "canonical-pso"

    @property
    def is_deterministic(self) -> bool:
        """True for algorithms that draw no random numbers."""
        return self in (AlgorithmKind.DBSCAN, AlgorithmKind.HIERARCHICAL)


class ReportFormat(str, Enum):
    """Report file formats."""

    CSV = "csv"
    JSON = "json"


class BuiltinDataset(str, Enum):
    """Datasets bundled with scikit-learn."""

    WINE = "wine"


class KMeansConfig(BaseModel):
    """Typical K-means (Lloyd iterations) configuration."""

    model_config = ConfigDict(extra="forbid")

    k: int = Field(..., ge=1)
    max_iter: int = Field(300, ge=1)
    tol: float = Field(1e-6, ge=0.0)
    metric: Metric = Metric.EUCLIDEAN
    seed: int = Field(0, ge=0, lt=SEED_LIMIT)
    init: KMeansInit = KMeansInit.RANDOM_POINTS
    initial_centroids: Optional[List[List[float]]] = None

    @model_validator(mode="after")
    def validate_explicit_init(self):
        """Explicit seeding needs k centroid rows of one width."""
        if self.init == KMeansInit.EXPLICIT:
            if not self.initial_centroids:
                raise ValueError("initial_centroids required when init is 'explicit'")
            if len(self.initial_centroids) != self.k:
                raise ValueError(f"initial_centroids has {len(self.initial_centroids)} rows, expected k={self.k}")
            widths = {len(row) for row in self.initial_centroids}
            if len(widths) != 1 or 0 in widths:
                raise ValueError("initial_centroids rows must be non-empty and of equal length")
        return self


class PsoConfig(BaseModel):
    """PSO based K-means configuration.

    ``c1``/``c2`` default to 2.05 for the canonical variant and 2.0 for the
    simple one. When ``chi`` is left unset the canonical variant derives it
    from ``c1 + c2`` (see ``swarm.clerc_constriction``).
    """

    model_config = ConfigDict(extra="forbid")

    variant: PsoVariant = PsoVariant.CANONICAL
    n_particles: int = Field(20, ge=1)
    c1: Optional[float] = Field(None, ge=0.0)
    c2: Optional[float] = Field(None, ge=0.0)
    chi: Optional[float] = None
    max_iter: int = Field(150, ge=1)
    tol: float = Field(0.0, ge=0.0)
    k: int = Field(..., ge=1)
    metric: Metric = Metric.EUCLIDEAN
    seed: int = Field(0, ge=0, lt=SEED_LIMIT)
    kmeans_refine: bool = False
    random_scaling: RandomScaling = RandomScaling.PER_PARTICLE

    @field_validator("chi")
    @classmethod
    def validate_chi(cls, chi):
        """Constriction coefficient must lie in (0, 1]."""
        if chi is not None and not 0.0 < chi <= 1.0:
            raise ValueError(f"chi must be in (0, 1], got {chi}")
        return chi

    @model_validator(mode="after")
    def apply_variant_defaults(self):
        """Fill in the acceleration coefficients for the chosen variant."""
        default = 2.05 if self.variant == PsoVariant.CANONICAL else 2.0
        if self.c1 is None:
            self.c1 = default
        if self.c2 is None:
            self.c2 = default
        if self.variant == PsoVariant.CANONICAL and self.chi is None and self.c1 + self.c2 <= 4.0:
            raise ValueError("canonical variant needs chi, or c1 + c2 > 4 to derive it")
        return self


class DbscanConfig(BaseModel):
    """DBSCAN configuration."""

    model_config = ConfigDict(extra="forbid")

    eps: float = Field(..., gt=0.0)
    minpts: int = Field(..., ge=1)
    metric: Metric = Metric.EUCLIDEAN


class HierConfig(BaseModel):
    """Agglomerative hierarchical clustering configuration."""

    model_config = ConfigDict(extra="forbid")

    k: int = Field(..., ge=1)
    linkage: Linkage = Linkage.AVERAGE
    metric: Metric = Metric.EUCLIDEAN


AlgorithmConfig = Union[KMeansConfig, PsoConfig, DbscanConfig, HierConfig]


class SyntheticSpec(BaseModel):
    """Seeded Gaussian-blob generator, shaped like the air-pollution data by default."""

    n_objects: int = Field(305, ge=1)
    n_features: int = Field(7, ge=1)
    n_classes: int = Field(5, ge=1)
    cluster_std: float = Field(8.0, gt=0.0)
    center_low: float = 0.0
    center_high: float = 200.0
    seed: int = Field(0, ge=0, lt=2**32)

    @model_validator(mode="after")
    def validate_center_box(self):
        """Blob centres are drawn from [center_low, center_high)."""
        if self.center_high <= self.center_low:
            raise ValueError("center_high must exceed center_low")
        return self


class DatasetSpec(BaseModel):
    """One dataset of an experiment."""

    name: str
    path: Optional[str] = None
    builtin: Optional[BuiltinDataset] = None
    synthetic: Optional[SyntheticSpec] = None
    has_header: bool = False
    label_column: Optional[int] = Field(None, ge=0)
    normalize: bool = False
    k: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def validate_single_source(self):
        """Exactly one of path, builtin and synthetic must be given."""
        sources = [s for s in (self.path, self.builtin, self.synthetic) if s is not None]
        if len(sources) != 1:
            raise ValueError(f"dataset '{self.name}' needs exactly one of path, builtin, synthetic")
        return self


class AlgorithmSpec(BaseModel):
    """One algorithm column of an experiment."""

    name: str
    kind: AlgorithmKind
    params: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def validate_params(self):
        """Params must build a valid module config."""
        k = len(self.params.get("initial_centroids") or [None])
        try:
            self.build_config(k=k, seed=0)
        except ValidationError as e:
            raise ValueError(f"invalid params for algorithm '{self.name}': {e}")
        return self

    def build_config(self, k: int, seed: int) -> AlgorithmConfig:
        """Build the module config for one experiment cell.

        Args:
            k: Cluster count for the dataset (ignored by DBSCAN, overridden by params)
            seed: Per-cell seed (ignored by deterministic algorithms)

        Returns:
            Validated algorithm configuration
        """
        params = dict(self.params)
        if self.kind == AlgorithmKind.DBSCAN:
            return DbscanConfig(**params)
        params.setdefault("k", k)
        if self.kind == AlgorithmKind.HIERARCHICAL:
            return HierConfig(**params)
        params["seed"] = seed
        if self.kind == AlgorithmKind.KMEANS:
            return KMeansConfig(**params)
        variant = PsoVariant.SIMPLE if self.kind == AlgorithmKind.SIMPLE_PSO else PsoVariant.CANONICAL
        params["variant"] = variant
        return PsoConfig(**params)


class ExperimentSettings(BaseModel):
    """Run-wide experiment settings."""

    name: str = "experiment"
    trials: int = Field(1, ge=1)
    base_seed: int = Field(0, ge=0, lt=SEED_LIMIT)
    output_dir: str = "results"
    report_formats: List[ReportFormat] = Field(default_factory=lambda: [ReportFormat.CSV, ReportFormat.JSON])
    force_anova_all: bool = False
    workers: int = Field(1, ge=1)


class ExperimentConfig(BaseModel):
    """Root experiment configuration."""

    experiment: ExperimentSettings = Field(default_factory=ExperimentSettings)
    datasets: List[DatasetSpec] = Field(..., min_length=1)
    algorithms: List[AlgorithmSpec] = Field(..., min_length=1)

    @field_validator("datasets")
    @classmethod
    def validate_dataset_names(cls, datasets):
        """Dataset names key every report table."""
        names = [d.name for d in datasets]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate dataset names: {names}")
        return datasets

    @field_validator("algorithms")
    @classmethod
    def validate_algorithm_names(cls, algorithms):
        """Algorithm names are table columns."""
        names = [a.name for a in algorithms]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate algorithm names: {names}")
        return algorithms

    def get_dataset(self, name: str) -> Optional[DatasetSpec]:
        """Get a dataset spec by name."""
        return next((d for d in self.datasets if d.name == name), None)

    def get_algorithm(self, name: str) -> Optional[AlgorithmSpec]:
        """Get an algorithm spec by name."""
        return next((a for a in self.algorithms if a.name == name), None)
