"""Exception types shared across the package."""


class ThermoCountError(Exception):
    """Base class for all package errors."""


class FormatError(ThermoCountError):
    """A file or payload could not be parsed (bad PGM, bad manifest, bad scene)."""


class ParameterError(ThermoCountError):
    """An argument or tunable parameter is outside its allowed range."""
