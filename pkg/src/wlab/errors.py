"""Exception hierarchy shared by every wlab module."""


class WeingartenError(Exception):
    """Base class for all wlab failures."""


class DomainError(WeingartenError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class NonPositiveExtrinsic(DomainError):
    """The extrinsic curvature would be <= 0, violating K_e > 0."""


class NoTurningPoint(WeingartenError):
    """The profile never reaches a vertical tangent (non-compact data)."""


class StepFailure(WeingartenError, RuntimeError):
    """The ODE integrator could not meet the requested tolerances."""


class DegenerateChart(WeingartenError):
    """Conformal chart construction hit degenerate coordinates."""


class ProjectionMismatch(WeingartenError, ValueError):
    """A projection was requested for the wrong ambient space."""
