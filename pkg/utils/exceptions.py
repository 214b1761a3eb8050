from typing import Optional


class FlowError(Exception):
    """
    Base class for every error raised by the flow library
    """


class InvalidArgumentError(FlowError, ValueError):
    """
    An argument is outside the domain of the operation
    """


class UnsupportedRegimeError(InvalidArgumentError):
    """
    The arguments are valid numbers but the privacy analysis does not cover them
    """


class PreconditionError(FlowError):
    """
    The input data violates a requirement of the run (e.g. unnormalized private rows)
    """


class ConfigError(FlowError):
    """
    A configuration file or preset could not be read
    """


class NumericError(FlowError, ArithmeticError):
    """
    The flow produced non-finite values
    """


class DatasetParseError(FlowError):
    """
    A dataset file is malformed
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
