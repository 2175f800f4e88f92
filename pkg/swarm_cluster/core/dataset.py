"""Dataset loading, normalization and distance metrics."""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.spatial import distance as spd
from sklearn.datasets import load_wine, make_blobs

from ..config.models import BuiltinDataset, Metric, SyntheticSpec
from ..errors import DatasetError

logger = logging.getLogger(__name__)

# scipy names for each metric
_SCIPY_METRIC = {
    Metric.EUCLIDEAN: "euclidean",
    Metric.SQUARED_EUCLIDEAN: "sqeuclidean",
    Metric.MANHATTAN: "cityblock",
}


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense real-valued feature matrix with optional class labels.

    ``points`` is stored as a read-only float64 copy so a Dataset can be shared
    freely between concurrent runs. ``labels`` is never seen by the clustering
    algorithms; it only feeds external validation.
    """

    points: np.ndarray
    labels: Optional[np.ndarray] = None
    feature_names: Tuple[str, ...] = field(default_factory=tuple)
    name: str = "dataset"

    def __post_init__(self):
        points = np.array(self.points, dtype=np.float64, copy=True)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise DatasetError(f"dataset '{self.name}' needs at least one object and one feature")
        if not np.all(np.isfinite(points)):
            row = int(np.argwhere(~np.isfinite(points))[0][0])
            raise DatasetError(f"dataset '{self.name}' contains non-finite values", row=row)
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=object).reshape(-1)
            if labels.shape[0] != points.shape[0]:
                raise DatasetError(f"{labels.shape[0]} labels given for {points.shape[0]} objects")
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

        names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(points.shape[1]))
        if len(names) != points.shape[1]:
            raise DatasetError(f"{len(names)} feature names given for {points.shape[1]} features")
        object.__setattr__(self, "feature_names", names)

    @property
    def n_objects(self) -> int:
        return int(self.points.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.points.shape[1])

    @property
    def has_labels(self) -> bool:
        return self.labels is not None

    @property
    def n_classes(self) -> Optional[int]:
        """Number of distinct ground-truth classes, if labels are present."""
        if self.labels is None:
            return None
        return len(set(self.labels.tolist()))

    def label_codes(self) -> np.ndarray:
        """Ground-truth labels as integer codes 0..n_classes-1 (sorted by label)."""
        if self.labels is None:
            raise DatasetError(f"dataset '{self.name}' has no labels")
        _, codes = np.unique(self.labels.astype(str), return_inverse=True)
        return codes.astype(np.int64)

    def with_points(self, points: np.ndarray) -> "Dataset":
        """Copy of this dataset with a replaced feature matrix."""
        return replace(self, points=points)

    def to_csv(self, path: Union[str, Path], header: bool = True) -> Path:
        """Write the dataset as CSV, labels (if any) in column 0.

        Floats are written with 17 significant digits so that a reload yields
        the identical matrix.
        """
        frame = pd.DataFrame(self.points, columns=list(self.feature_names))
        if self.labels is not None:
            frame.insert(0, "label", self.labels)
        path = Path(path)
        frame.to_csv(path, index=False, header=header, float_format="%.17g")
        return path


def load_csv(
    path: Union[str, Path],
    has_header: bool = False,
    label_column: Optional[int] = None,
    name: Optional[str] = None,
) -> Dataset:
    """Load a comma-separated UTF-8 file into a Dataset.

    Args:
        path: CSV file path
        has_header: First row holds column names
        label_column: Zero-based index of the class-label column, if any
        name: Dataset name (defaults to the file stem)

    Returns:
        Dataset with one object per data row

    Raises:
        DatasetError: Unreadable or empty file, ragged rows, missing or
            non-numeric cells. Row and column in messages are 1-based file
            line and column numbers.
    """
    path = Path(path)
    name = name or path.stem
    if not path.is_file():
        raise DatasetError(f"cannot read dataset file '{path}'")

    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DatasetError(f"dataset file '{path}' is empty")
    except pd.errors.ParserError as e:
        raise DatasetError(f"dataset file '{path}' has ragged rows: {e}")
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetError(f"cannot read dataset file '{path}': {e}")

    if frame.shape[0] == 0:
        raise DatasetError(f"dataset file '{path}' has no data rows")

    line_offset = 2 if has_header else 1
    # Short rows are padded with NaN even with keep_default_na disabled
    short = frame.isna().any(axis=1).to_numpy()
    if short.any():
        row = int(np.argmax(short))
        raise DatasetError(f"dataset file '{path}' has ragged rows", row=row + line_offset)

    n_columns = frame.shape[1]
    if label_column is not None and not 0 <= label_column < n_columns:
        raise DatasetError(f"label column {label_column} out of range for {n_columns} columns")

    feature_columns = [j for j in range(n_columns) if j != label_column]
    if not feature_columns:
        raise DatasetError(f"dataset file '{path}' has no feature columns")

    values = np.empty((frame.shape[0], len(feature_columns)), dtype=np.float64)
    for out_j, j in enumerate(feature_columns):
        raw = frame.iloc[:, j].str.strip()
        parsed = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
        bad = ~np.isfinite(parsed)
        if bad.any():
            row = int(np.argmax(bad))
            cell = raw.iloc[row]
            reason = "missing value" if cell == "" else f"non-numeric cell '{cell}'"
            raise DatasetError(f"dataset file '{path}': {reason}", row=row + line_offset, column=j + 1)
        # numpy parses with correct rounding, so written matrices reload bit for bit
        values[:, out_j] = raw.to_numpy(dtype=str).astype(np.float64)

    labels = None
    if label_column is not None:
        labels = frame.iloc[:, label_column].str.strip().to_numpy(dtype=object)

    if has_header:
        feature_names: Tuple[str, ...] = tuple(str(frame.columns[j]) for j in feature_columns)
    else:
        feature_names = tuple(f"x{j + 1}" for j in range(len(feature_columns)))

    dataset = Dataset(points=values, labels=labels, feature_names=feature_names, name=name)
    logger.debug(
        "Loaded %s: %d objects, %d features, %s classes",
        name,
        dataset.n_objects,
        dataset.n_features,
        dataset.n_classes,
    )
    return dataset


def normalize_minmax(d: Dataset) -> Dataset:
    """Rescale each feature column to [0, 1]; constant columns map to 0."""
    points = d.points
    low = points.min(axis=0)
    span = points.max(axis=0) - low
    safe_span = np.where(span > 0, span, 1.0)
    scaled = (points - low) / safe_span
    scaled[:, span == 0] = 0.0
    return d.with_points(scaled)


def distance(a: Sequence[float], b: Sequence[float], m: Metric) -> float:
    """Distance between two feature vectors under the given metric."""
    u = np.asarray(a, dtype=np.float64).reshape(-1)
    v = np.asarray(b, dtype=np.float64).reshape(-1)
    if u.shape != v.shape:
        raise DatasetError(f"vector length mismatch: {u.shape[0]} vs {v.shape[0]}")
    if m == Metric.EUCLIDEAN:
        return float(spd.euclidean(u, v))
    if m == Metric.SQUARED_EUCLIDEAN:
        return float(spd.sqeuclidean(u, v))
    return float(spd.cityblock(u, v))


def pairwise_distances(a: np.ndarray, b: np.ndarray, m: Metric) -> np.ndarray:
    """Distance matrix between the rows of ``a`` and the rows of ``b``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise DatasetError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]} features")
    return spd.cdist(a, b, metric=_SCIPY_METRIC[Metric(m)])


def make_synthetic(spec: Optional[SyntheticSpec] = None, name: str = "synthetic") -> Dataset:
    """Seeded Gaussian blobs standing in for data that cannot be redistributed.

    The default shape (305 objects, 7 features, 5 classes) mirrors the
    air-pollution dataset. The result is always named with a ``synthetic``
    marker so reports never pass it off as real measurements.
    """
    spec = spec or SyntheticSpec()
    points, labels = make_blobs(
        n_samples=spec.n_objects,
        n_features=spec.n_features,
        centers=spec.n_classes,
        cluster_std=spec.cluster_std,
        center_box=(spec.center_low, spec.center_high),
        random_state=spec.seed,
    )
    if "synthetic" not in name:
        name = f"{name}-synthetic"
    return Dataset(points=points, labels=labels, name=name)


def load_builtin(which: Union[str, BuiltinDataset], name: Optional[str] = None) -> Dataset:
    """Load a UCI dataset bundled with scikit-learn."""
    which = BuiltinDataset(which)
    if which == BuiltinDataset.WINE:
        bunch = load_wine()
        return Dataset(
            points=bunch.data,
            labels=bunch.target,
            feature_names=tuple(bunch.feature_names),
            name=name or "wine",
        )
    raise DatasetError(f"unknown builtin dataset '{which}'")
