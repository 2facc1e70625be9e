"""Exception and warning types raised across the package."""


class HDTailError(Exception):
    """Base class for all errors raised by :mod:`hdtail`."""


class InvalidArgumentError(HDTailError, ValueError):
    """An argument violates a documented precondition."""


class ResourceLimitError(HDTailError):
    """A configured size cap would be exceeded."""


class UnsupportedError(HDTailError, NotImplementedError):
    """The requested family or combination has no implementation."""


class InsufficientRangeError(HDTailError):
    """A fit cannot be carried out on the available rows."""


class DataError(HDTailError):
    """Input data could not be parsed or is malformed."""


class ConfigError(HDTailError):
    """An experiment configuration is malformed."""


class PrecisionWarning(UserWarning):
    """A numerical oracle could not certify the requested precision."""
