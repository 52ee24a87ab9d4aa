"""Exception types shared across the package."""


class FairstreamError(Exception):
    """Base class for all library errors."""


class SchemaError(FairstreamError):
    """Schema file missing, unparseable, or violating a schema invariant."""


class DatasetFormatError(FairstreamError):
    """Data file does not conform to the declared schema."""


class ConfigError(FairstreamError):
    """Invalid learner or run configuration."""


class UndefinedStatisticError(FairstreamError):
    """A statistic is undefined for the given input (e.g. McNemar with no
    discordant pairs, correlation of a constant sequence)."""
