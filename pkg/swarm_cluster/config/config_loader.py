"""Configuration loader for experiment YAML files."""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from .models import ExperimentConfig

logger = logging.getLogger(__name__)


class ConfigLoader:
    """Load and validate an experiment configuration file."""

    def __init__(self, config_file: Union[str, Path] = "experiment.yaml"):
        """Initialize config loader.

        Args:
            config_file: Path to configuration file (default: experiment.yaml)
        """
        self.config_file = Path(config_file)
        self._config: Optional[ExperimentConfig] = None
        self._raw_config: Optional[Dict[str, Any]] = None

    def load_config(self, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
        """Load the experiment configuration.

        Args:
            overrides: Optional experiment-level overrides (trials, base_seed, output_dir, ...)

        Returns:
            Validated ExperimentConfig object

        Raises:
            FileNotFoundError: If config file doesn't exist
            ValueError: If validation fails
        """
        if self._raw_config is None:
            self._load_raw_config()

        if self._config is None:
            self._validate_config()

        if not self._config:
            raise ValueError("Configuration not loaded")

        if overrides:
            return self._apply_overrides(self._config, overrides)
        return self._config

    def _load_raw_config(self) -> None:
        """Load raw YAML configuration."""
        if not self.config_file.exists():
            raise FileNotFoundError(f"Configuration file '{self.config_file}' not found")

        with open(self.config_file, "r", encoding="utf-8") as f:
            try:
                self._raw_config = yaml.safe_load(f)
            except yaml.YAMLError as e:
                raise ValueError(f"Configuration file '{self.config_file}' is not valid YAML: {e}")
        logger.debug("Loaded configuration from %s", self.config_file)

    def _validate_config(self) -> None:
        """Validate configuration against Pydantic models."""
        try:
            if not self._raw_config:
                raise ValueError(f"Configuration file '{self.config_file}' is empty")
            self._config = ExperimentConfig.model_validate(self._raw_config)
        except ValidationError as e:
            raise ValueError(f"Configuration validation failed: {e}")

        # Relative dataset paths are resolved against the config file location
        for dataset in self._config.datasets:
            if dataset.path and not Path(dataset.path).is_absolute():
                dataset.path = str((self.config_file.parent / dataset.path).resolve())

    def _apply_overrides(self, config: ExperimentConfig, overrides: Dict[str, Any]) -> ExperimentConfig:
        """Apply runtime overrides to the experiment settings.

        Args:
            config: Base configuration
            overrides: Dictionary of overrides

        Returns:
            Modified configuration
        """
        modified = config.model_copy(deep=True)
        settings = modified.experiment.model_dump()
        for key, value in overrides.items():
            if key not in settings:
                raise ValueError(f"Unknown experiment setting '{key}'")
            settings[key] = value
        try:
            modified.experiment = type(modified.experiment).model_validate(settings)
        except ValidationError as e:
            raise ValueError(f"Configuration validation failed: {e}")
        return modified

    def validate_config_file(self) -> bool:
        """Validate the configuration file.

        Returns:
            True if valid, raises exception otherwise
        """
        try:
            self._load_raw_config()
            self._validate_config()
            return True
        except Exception as e:
            raise ValueError(f"Configuration validation failed: {e}")

    @staticmethod
    def generate_example_config(output_path: str = "experiment.yaml.example") -> None:
        """Generate an example configuration file.

        Args:
            output_path: Path to write example configuration
        """
        example_config = {
            "experiment": {
                "name": "wine-comparison",
                "trials": 20,
                "base_seed": 2024,
                "output_dir": "results/wine",
                "report_formats": ["csv", "json"],
                "force_anova_all": False,
                "workers": 1,
            },
            "datasets": [
                {"name": "wine", "builtin": "wine", "k": 3},
                {
                    "name": "air-pollution-synthetic",
                    "synthetic": {"n_objects": 305, "n_features": 7, "n_classes": 5, "seed": 7},
                    "normalize": True,
                },
            ],
            "algorithms": [
                {"name": "kmeans", "kind": "kmeans", "params": {"max_iter": 300}},
                {"name": "dbscan", "kind": "dbscan", "params": {"eps": 25.0, "minpts": 65}},
                {"name": "hierarchical", "kind": "hierarchical", "params": {"linkage": "average"}},
                {"name": "simple-pso", "kind": "simple-pso", "params": {"n_particles": 20, "max_iter": 150}},
                {"name": "canonical-pso", "kind": "canonical-pso", "params": {"n_particles": 20, "max_iter": 150}},
            ],
        }

        with open(output_path, "w", encoding="utf-8") as f:
            yaml.dump(example_config, f, default_flow_style=False, sort_keys=False)


def get_config(config_file: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Helper function to quickly load configuration.

    Args:
        config_file: Path to the experiment YAML file
        overrides: Optional experiment-level overrides

    Returns:
        Loaded and validated configuration
    """
    loader = ConfigLoader(config_file)
    return loader.load_config(overrides)
