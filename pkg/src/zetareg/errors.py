"""Exception and warning types raised across the package."""


class ZetaRegError(Exception):
    """Base class for every error raised by zetareg."""


class DomainError(ZetaRegError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleProximity(DomainError):
    """The evaluation point is too close to the pole of zeta at s = 1."""


class PrefactorSingularity(DomainError):
    """The point is too close to a zero of 1 - 2**(1 - s) off the real axis."""


class PoleOfGamma(DomainError):
    """The argument is (numerically) a non-positive integer."""


class OnCriticalLine(DomainError):
    """The line weight |Re(s) - 1/2|**-p is undefined on the critical line."""


class ZeroValue(ZetaRegError, ArithmeticError):
    """|f(s)| fell below the underflow guard before exponentiation."""


class Nonconvergence(ZetaRegError, ArithmeticError):
    """An iterative or series method ran out of budget before reaching tol."""


class QuadratureFailure(ZetaRegError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""


class EmptyDomain(ZetaRegError):
    """No grid point survived the excision."""


class RankDeficient(ZetaRegError, ArithmeticError):
    """The least-squares design matrix is (numerically) rank deficient."""


class FitPoor(ZetaRegError):
    """A divergence fit has r**2 below the acceptance threshold.

    The full probe result is attached as ``result`` so callers can still
    inspect the measured values.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class StepTooCoarseWarning(UserWarning):
    """Two located zeros are closer than twice the scan step."""


class OverlapWithWallWarning(UserWarning):
    """An excision disk straddles one of the strip walls."""


# name used by the asymptotics API
NoConvergence = Nonconvergence
