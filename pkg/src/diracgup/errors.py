"""Exception hierarchy.

Every physics-domain failure derives from :class:`DiracGUPError` so callers
(the CLI in particular) can catch one type and map it to an exit code.
"""


class DiracGUPError(ValueError):
    """Base class for domain errors raised by this package."""


class NoMinimalLengthError(DiracGUPError):
    """beta == 0: the dimensionless parameterization needs a minimal length."""


class CriticalPointError(DiracGUPError):
    """rho == 0 (lambda == 0): the first-order operators lose their derivative part."""


class RegimeBoundaryError(DiracGUPError):
    """|rho| == rho_star: the closed forms are not defined on the regime boundary."""


class InadmissibleStateError(DiracGUPError):
    """The requested quantum numbers do not label a solution in this regime."""


class DiscardedSolutionError(InadmissibleStateError):
    """A component solution exists but cannot be paired into a spinor."""


class UnphysicalError(DiracGUPError):
    """Negative radicand when inverting k^2 for the energy."""


class LevelNotPermissibleError(DiracGUPError):
    """The level family has no members (degeneracy 0) at this rho."""


class HypergeometricPoleError(DiracGUPError):
    """Lower parameter of a terminating 2F1 hits a non-positive integer inside the sum."""


class QuadratureError(DiracGUPError):
    """Quadrature error estimate exceeds the requested tolerance."""


class BisectionError(DiracGUPError):
    """Sturm bisection failed to bracket or converge."""


class GridResolutionError(DiracGUPError):
    """The rho grid is too coarse to separate adjacent critical points."""
