"""Exception types shared across the package."""


class SSPError(Exception):
    """Base class for all errors raised by photonic_ssp."""


class NonPositiveElement(SSPError, ValueError):
    pass


class TargetOutOfRange(SSPError, ValueError):
    """Target lies outside [0, total]; the instance is trivially NO."""


class MissingTarget(SSPError, ValueError):
    pass


class CountOverflow(SSPError, OverflowError):
    pass


class InstanceTooLarge(SSPError, ValueError):
    pass


class InvalidParams(SSPError, ValueError):
    pass


class ThetaOutOfRange(SSPError, ValueError):
    pass


class NoCrossover(SSPError, RuntimeError):
    pass


class UnknownPreset(SSPError, KeyError):
    pass
