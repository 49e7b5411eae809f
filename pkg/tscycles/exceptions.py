"""
Errors raised by the analysis library.

Every error knows the exit status the CLI should return and the HTTP status the API
should answer with, so both surfaces map failures in the same way.
"""


class TscyclesError(Exception):
    exit_code = 1
    status_code = 500

    def __init__(self, message: str, context: str = ""):
        super().__init__(message)
        self.message = message
        self.context = context

    def with_context(self, context: str):
        """
        Prefix the error location (eg. `breaks/PMA`) and return the error.
        """
        self.context = f"{context}/{self.context}" if self.context else context
        return self

    def __str__(self):
        if self.context:
            return f"{self.context}: {self.message}"
        return self.message


class ConfigError(TscyclesError):
    exit_code = 2
    status_code = 400


class ParameterError(ConfigError):
    pass


class DataError(TscyclesError):
    exit_code = 3
    status_code = 422


class InputError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, message: str, row: int = None, column: str = None):
        if row is not None:
            message = f"row {row}, column `{column}`: {message}"
        super().__init__(message)
        self.row = row
        self.column = column


class ConsistencyError(DataError):
    def __init__(self, message: str, row: int = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class InsufficientDataError(DataError):
    pass


class DegenerateError(DataError):
    pass


class NumericError(TscyclesError):
    exit_code = 4
    status_code = 500
