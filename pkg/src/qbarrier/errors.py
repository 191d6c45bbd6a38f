"""Exception hierarchy for qbarrier."""


class QBarrierError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QBarrierError, ValueError):
    """An argument lies outside the supported mathematical domain."""


class TruncationError(QBarrierError):
    """A truncated photon-number sum failed its tail-mass certificate."""


class ConvergenceError(QBarrierError):
    """An iterative or quadrature computation did not reach its target."""


class EvanescentModeError(QBarrierError):
    """A retained sideband would have a non-propagating wave vector."""


class RegimeError(QBarrierError):
    """Parameters fall outside the validity regime of an approximation."""


class DegenerateError(QBarrierError):
    """The requested quantity carries no information for these inputs."""


class RegimeWarning(UserWarning):
    """Parameters sit near or outside an approximation's validity regime."""
