"""Exception hierarchy shared by all holeburn modules."""


class HoleburnError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HoleburnError, ValueError):
    """An argument lies outside the mathematically valid domain."""


class ConfigurationError(HoleburnError, ValueError):
    """A configuration or setup value is inconsistent or unusable."""


class ResolutionError(ConfigurationError):
    """A grid or step size is too coarse to represent the requested feature."""


class UsageError(HoleburnError, ValueError):
    """Arguments are individually valid but mutually inconsistent."""


class InsufficientDataError(HoleburnError, ValueError):
    """Not enough data points/peaks to perform the requested analysis."""


class NumericalInstabilityError(HoleburnError, RuntimeError):
    """A solver produced non-finite values or violated its stability guard.

    Attributes
    ----------
    time : float or None
        First simulation time (us) at which the instability was detected.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
