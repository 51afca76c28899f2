"""Exception hierarchy.

Two broad classes matter for the CLI exit-code contract: bad inputs
(``DomainError``, exit code 2) and numerical failures encountered while
computing with valid inputs (``NumericalError`` subclasses, exit code 1).
"""


class SpinbathError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SpinbathError, ValueError):
    """Input violates a precondition (wrong sign, out-of-range parameter)."""


class NumericalError(SpinbathError, RuntimeError):
    """A numerical procedure failed to produce a trustworthy result."""


class QuadratureError(NumericalError):
    """An adaptive quadrature did not converge to the requested tolerance."""


class SingularIntegrandError(NumericalError):
    """The integrand is singular on the integration domain (e.g. at or
    beyond the critical coupling)."""


class RootPolishError(NumericalError):
    """Newton refinement of one or more characteristic roots failed."""


class BracketError(NumericalError):
    """A bisection search could not bracket the sought sign change."""


class StabilityError(NumericalError):
    """A drift matrix has an eigenvalue with positive real part, so no
    stationary covariance exists."""


class TruncationError(NumericalError):
    """A truncated-Fock computation exceeded its convergence or memory cap."""


class ExtrapolationError(NumericalError):
    """Richardson extrapolation did not converge."""


class FitDegeneracyError(NumericalError):
    """A least-squares fit came out too poor to be meaningful (low R^2)."""
