"""Exception types shared across the package."""


class CourantLabError(Exception):
    """Base class for package-specific errors."""


class InvalidSpecError(CourantLabError, ValueError):
    """Rectangle or operator specification is malformed."""


class PreconditionError(CourantLabError, ValueError):
    """A stated precondition of an operation was violated."""


class InsufficientCutoffError(CourantLabError):
    """A query exceeded the enumerated part of an exact spectrum."""


class InsufficientSpectrumError(CourantLabError):
    """A query exceeded the trustworthy range of a numeric spectrum."""


class InvalidMergeError(CourantLabError, ValueError):
    """Spectra with incompatible conventions cannot be merged."""


class MixedConventionError(CourantLabError, ValueError):
    """Exact and numeric spectra were mixed within a single family query."""


class EmptyDomainError(CourantLabError, ValueError):
    """A rasterization produced no interior nodes."""


class DegenerateInputError(CourantLabError, ValueError):
    """An input vector carries no usable sign information."""


class ConvergenceError(CourantLabError, RuntimeError):
    """An iterative solve stopped before reaching its tolerance."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = residuals
