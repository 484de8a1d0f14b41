"""Exception types shared across the package."""


class SchemaError(ValueError):
    """An input file does not match the expected schema (e.g. missing column)."""


class ConfigError(ValueError):
    """A coefficient registry or config file is missing or inconsistent."""
