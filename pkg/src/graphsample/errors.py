"""Exception types shared across the package."""


class GraphSampleError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GraphSampleError, ValueError):
    """An argument is outside its documented range."""


class DegenerateModelError(GraphSampleError):
    """A model parameter makes the analytic quantity blow up (e.g. b in {0, 1})."""


class DegenerateInputError(GraphSampleError):
    """An input is structurally unusable (all-zero weights, zero column, ...)."""


class AssumptionViolationError(GraphSampleError):
    """The expected sampled Gram matrix is numerically singular."""


class EnumerationCapError(GraphSampleError):
    """A brute-force support enumeration would exceed the configured cap."""


class ContractError(GraphSampleError):
    """A precondition flag required by the operation is not satisfied."""
