"""Exception types shared across the package."""


class SqspinError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SqspinError, ValueError):
    """An argument lies outside the mathematical domain of the routine."""


class SolverFailure(SqspinError, RuntimeError):
    """A root solve or self-consistency iteration did not converge."""


class NoSignChange(SolverFailure):
    """The supplied bracket does not straddle a root."""


class NonFinite(SqspinError, ArithmeticError):
    """A function evaluation produced NaN or infinity."""


class PhaseError(SqspinError, ValueError):
    """The requested quantity is undefined in the phase at these parameters."""


class SeriesDivergence(SqspinError, RuntimeError):
    """A series accumulation failed to converge within its term budget."""


class TruncationError(SqspinError, RuntimeError):
    """A truncated Fock-space computation is not trustworthy at this dimension."""


class StencilOutOfPhase(SqspinError, ValueError):
    """A finite-difference stencil would cross a phase boundary."""
