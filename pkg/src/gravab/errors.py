"""Exception hierarchy.

``ConfigurationError`` maps to CLI exit code 2, ``NumericalError`` to 3.
"""

from gravab._kernels import KeplerConvergenceError


class GravABError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(GravABError, ValueError):
    """Invalid inputs: a domain violation or an inconsistent configuration.

    ``field`` names the offending parameter when there is a single one.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class NumericalError(GravABError, ArithmeticError):
    """An iterative method failed to converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EstimationError(NumericalError):
    """The modulation-index search could not bracket a minimum."""


class SpectrumRangeError(GravABError, IndexError):
    """A requested spectral line falls outside the sampled band."""


class PipelineError(GravABError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the original."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


__all__ = [
    "GravABError",
    "ConfigurationError",
    "NumericalError",
    "EstimationError",
    "SpectrumRangeError",
    "PipelineError",
    "KeplerConvergenceError",
]
