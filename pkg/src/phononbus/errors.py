"""Exception hierarchy.

Configuration problems derive from :class:`ConfigError` and numerical
failures from :class:`NumericalError`; the CLI maps them to exit codes 1 and 2.
"""


class PhononBusError(Exception):
    """Base class for all package errors."""


class ConfigError(PhononBusError, ValueError):
    """Invalid or inconsistent configuration."""


class ScenarioParseError(ConfigError):
    """The scenario file is not valid JSON."""


class SchemaError(ConfigError):
    """The scenario document does not follow the documented schema."""


class InvariantError(ConfigError):
    """A physical invariant of a configured object is violated."""


class UnknownMaterialError(ConfigError):
    """Requested material preset does not exist."""


class NumericalError(PhononBusError, RuntimeError):
    """A numerical procedure failed to reach its accuracy contract."""


class RootNotFoundError(NumericalError):
    """No sign change was found in the scanned bracket."""


class ConvergenceError(NumericalError):
    """Discretisation or integration did not converge."""


class TruncationError(NumericalError):
    """Population reached the edge of a truncated Fock space."""
