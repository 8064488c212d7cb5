"""Exception and warning types shared across the package."""


class BlockadeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BlockadeError, ValueError):
    """An argument lies outside the domain of a formula (pole, bad length)."""


class ParameterError(BlockadeError, ValueError):
    """A parameter object violates one of its invariants."""


class NumericalError(BlockadeError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy.

    Attributes:
        estimate: best value obtained before giving up, if any.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge within its subdivision budget."""


class EmptySupportError(BlockadeError, ValueError):
    """The requested detection points fall outside the wave-packet support."""


class IllConditionedG2Error(NumericalError):
    """The g2 normalization is too small for the ratio to be meaningful."""


class WindowTooNarrowError(BlockadeError, ValueError):
    """The detuning grid captures too little of the input Lorentzian."""


class IntegratorAccuracyError(NumericalError):
    """Norm drift during time stepping exceeded the accepted bound."""


class PrematureExtractionError(NumericalError):
    """Long-time amplitudes were requested while the atoms were still excited."""


class InsufficientHorizonError(NumericalError):
    """A sampled series is too short for its Laplace transform to converge."""


class ValidityWarning(UserWarning):
    """Parameters lie outside the regime where an approximation holds."""


class ResolutionWarning(UserWarning):
    """Discretization settings are coarser than recommended."""
