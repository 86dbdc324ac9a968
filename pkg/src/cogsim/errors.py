"""Exception types shared across the package."""


class CogsimError(Exception):
    """Base class for all package-specific errors."""


class ContractViolation(CogsimError):
    """An operation was called outside its stated precondition."""


class ConfigError(CogsimError):
    """A run configuration failed validation.

    ``field`` is the dotted path of the offending entry, e.g.
    ``parameters.theta_att``.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class TraceFormatError(CogsimError):
    """A trace file is malformed; names the first offending record."""

    def __init__(self, record_index: int, message: str):
        self.record_index = record_index
        self.message = message
        super().__init__(f"record {record_index}: {message}")


class OracleRefusal(CogsimError):
    """The configuration is outside the bounds the oracle can walk."""
