"""Exception hierarchy shared by every simulator module.

The CLI maps ``ConfigError`` to exit status 2 and ``NumericalError`` to 3.
"""


class QMemError(Exception):
    """Base class for simulator failures."""


class ConfigError(QMemError, ValueError):
    """A scenario or physical input violates its schema or range."""


class NumericalError(QMemError):
    """A computation could not produce a trustworthy result."""


class StateError(NumericalError, ValueError):
    """A matrix does not satisfy the state or dimension preconditions."""


class ChannelError(NumericalError):
    """Channel images are incomplete or inconsistent."""


class CPViolationError(NumericalError):
    """A Choi matrix has eigenvalues below the clamp tolerance."""


class DegenerateBranchError(NumericalError):
    """A measurement branch carries no amplitude (trace below tolerance)."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge at the requested tolerance."""


class SolverError(NumericalError):
    """An ODE integration failed or drifted beyond its invariants."""


class WeakDriveError(SolverError):
    """The Langevin drive excited the emitter beyond the weak-drive regime."""


class ModelError(NumericalError):
    """A physical model is ill-defined for the requested configuration."""
