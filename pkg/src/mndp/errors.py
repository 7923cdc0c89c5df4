"""Exception types raised across the package."""


class MndpError(Exception):
    """Base class for all package errors."""


class CollinearPoints(MndpError, ValueError):
    """Three points span (numerically) zero area; no unique circumcircle."""


class EmptyInput(MndpError, ValueError):
    pass


class InfeasibleParams(MndpError, ValueError):
    """UAV parameters leave no energy for a positive charging radius."""


class ParseError(MndpError, ValueError):
    pass


class BsNotRemovable(MndpError, ValueError):
    pass


class ConfigError(MndpError, ValueError):
    pass
