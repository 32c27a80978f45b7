"""Exception types raised across the package."""


class MicrogridError(Exception):
    """Base class for all package errors."""


class DomainError(MicrogridError, ValueError):
    """An argument lies outside the domain of the operation."""


class LengthError(MicrogridError, ValueError):
    """A series or record collection has the wrong length."""


class ParseError(MicrogridError, ValueError):
    """An input file could not be parsed.

    ``row`` is the 1-based row number of the offending line.
    """

    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class ContractError(MicrogridError, RuntimeError):
    """A caller broke an operation's calling contract."""


class ConfigError(MicrogridError, ValueError):
    """A run configuration is invalid. ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
