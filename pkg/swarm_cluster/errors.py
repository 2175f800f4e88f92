"""Exception hierarchy for swarm-cluster."""

from typing import Optional


class SwarmClusterError(Exception):
    """Base class for all package errors."""


class DatasetError(SwarmClusterError, ValueError):
    """Dataset could not be loaded or violates its invariants."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        if row is not None and column is not None:
            message = f"{message} (row {row}, column {column})"
        elif row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)


class PartitionError(SwarmClusterError, ValueError):
    """Partition bookkeeping failed (noise present, empty cluster, shape mismatch)."""


class ClusteringError(SwarmClusterError, ValueError):
    """A clustering algorithm was called with an invalid configuration for its data."""


class ValidityError(SwarmClusterError, ValueError):
    """A validity index precondition does not hold."""


class StatsError(SwarmClusterError, ValueError):
    """Statistical routine received unusable input."""


class ReportError(SwarmClusterError):
    """An experiment report could not be produced or written."""
