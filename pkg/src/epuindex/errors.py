"""Exception hierarchy; each class maps to one CLI exit code."""


class EpuError(Exception):
    exit_code = 1


class ConfigError(EpuError):
    """Invalid configuration or missing input file."""

    exit_code = 2


class DataError(EpuError):
    """Malformed or inconsistent input data."""

    exit_code = 3


class NumericalError(EpuError):
    """A numerical routine failed (non-convergence, degenerate fit)."""

    exit_code = 4

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
