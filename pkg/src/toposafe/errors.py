"""Shared exception types; the CLI maps them to distinct exit codes."""


class ConfigError(ValueError):
    """Invalid configuration or manifest input (CLI exit code 2)."""


class DataError(ValueError):
    """Missing or corrupt data artifact (CLI exit code 3)."""


class ConvergenceError(RuntimeError):
    """Numerical procedure failed to converge (CLI exit code 4)."""
