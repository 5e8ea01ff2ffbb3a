"""Exception hierarchy.

Each family carries the process exit code the CLI maps it to.
"""


class CapflowError(Exception):
    exit_code = 1


class ConfigError(CapflowError, ValueError):
    """Bad user configuration: unknown column, invalid ordering, bad flag value."""

    exit_code = 2


class DataError(CapflowError, ValueError):
    """Input data is unusable: too short, constant, missing values, misaligned."""

    exit_code = 3


class LoadError(DataError):
    """CSV ingestion failure. ``row`` is the 1-based line number in the file, when known."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class NumericalError(CapflowError, ArithmeticError):
    exit_code = 4


class RankDeficientError(NumericalError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class NotPositiveDefiniteError(NumericalError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot
