"""Exception hierarchy shared by every dx3 module."""


class DX3Error(Exception):
    """Base class for all library errors."""


class DomainError(DX3Error, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class MetricSingular(DomainError):
    """The conformal factor 1/(1 + lambda r^2) is singular or non-positive."""


class RegimeError(DX3Error, ValueError):
    """The requested energy regime does not match the parameters."""


class NoRealRoots(DomainError):
    """The turning-point equation has no admissible real root."""


class OffShell(DX3Error, ValueError):
    """A phase-space point does not lie on the requested energy shell."""


class SingularityApproach(DX3Error, RuntimeError):
    """An integrated trajectory entered the guard band around r_s."""


class StepFailure(DX3Error, RuntimeError):
    """The ODE integrator could not meet its tolerance."""


class EventNotFound(DX3Error, RuntimeError):
    """A requested integration event did not occur within the horizon."""
