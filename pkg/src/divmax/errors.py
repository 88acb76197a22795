"""Exception types shared across the package."""


class DivmaxError(Exception):
    """Base class for all package errors."""


class SelfLoopError(DivmaxError):
    """An edge (i, i) was supplied."""


class DuplicateEdgeError(DivmaxError):
    """The same node pair appears more than once in an edge list."""


class IndexOutOfRangeError(DivmaxError, IndexError):
    """A node index falls outside [0, n)."""


class LengthMismatchError(DivmaxError, ValueError):
    """A per-node vector does not have one entry per node."""


class NonBinaryExposureError(DivmaxError, ValueError):
    """An exposure value is not exactly -1 or +1."""


class AlreadySelectedError(DivmaxError):
    """Marginal gain requested for a node that is already in the selection."""


class UnsupportedCostsError(DivmaxError):
    """Cost vector outside the unit-class regime (some b_i < 1) required by the bounds."""


class SearchSpaceTooLargeError(DivmaxError):
    """Exhaustive enumeration would visit more subsets than the configured limit."""


class DimensionTooLargeError(DivmaxError):
    """Instance exceeds the dense-solver size ceiling."""


class DimensionMismatchError(DivmaxError, ValueError):
    """A solution file does not match the problem dimensions."""


class ParseError(DivmaxError, ValueError):
    """A data file could not be parsed.

    Carries the offending line number when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownNodeError(DivmaxError, KeyError):
    """An exposure or cost entry references a node absent from the edge list."""


class UnboundedError(DivmaxError):
    """The linear program is unbounded (indicates a model construction bug)."""


class SimplexStallError(DivmaxError):
    """The simplex iteration cap was exceeded."""


class InvalidProbabilityError(DivmaxError, ValueError):
    """Generator probability outside the valid range."""


class NonPositiveInputError(DivmaxError, ValueError):
    """Generator input that must be a positive integer is not."""
