"""Exception types shared across the package.

Plain ``ValueError`` is raised for caller contract violations (bad arguments,
mismatched rankings); the classes below mark data/domain conditions that the
CLI maps to exit codes.
"""


class HierarchyRankError(Exception):
    """Base class for domain errors raised by this package."""


class RecordFormatError(HierarchyRankError):
    """Malformed CSV input: bad header or unparseable row."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyNetworkError(HierarchyRankError):
    """No records survive filtering, so there is no network to build."""


class UndefinedMetricError(HierarchyRankError):
    """The requested quantity has no defined value on this input.

    Raised e.g. for hierarchy strength on a network whose every edge is a
    self-loop, or a Gini coefficient of an all-zero production vector.
    """


class SizeLimitError(HierarchyRankError):
    """Exhaustive enumeration refused: the instance is too large."""


class DegenerateTestError(HierarchyRankError):
    """Significance test undefined: both samples constant with equal means."""
