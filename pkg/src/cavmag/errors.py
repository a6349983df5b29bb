"""Exception types raised by the cavmag package."""


class CavmagError(Exception):
    """Base class for all cavmag errors."""


class SingularMatrix(CavmagError):
    """A pivot fell below the singularity threshold during LU factorization."""


class NoConvergence(CavmagError):
    """An iterative solver exhausted its iteration budget."""


class NonDecaying(CavmagError):
    """A transient does not decay, so no steady state can be reached."""


class NoSolution(CavmagError):
    """The requested mode crossing lies outside the field sweep."""


class WindowTooNarrow(CavmagError):
    """A zone window covers too few field points to classify."""


class NoBracket(CavmagError):
    """Order-parameter values at the bracket endpoints do not straddle the threshold."""


class ConfigError(CavmagError):
    """Base class for configuration validation failures."""


class SchemaError(ConfigError):
    """A configuration document violates the schema; message carries the JSON path."""


class DuplicateMode(ConfigError):
    """Two modes share a name."""


class UnknownModeInCoupling(ConfigError):
    """A coupling references a mode name that does not exist."""
