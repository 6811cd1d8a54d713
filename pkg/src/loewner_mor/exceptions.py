"""Exception hierarchy shared by the numerical modules and the CLI."""


class LoewnerMORError(Exception):
    """Base class for all package errors."""


class DomainError(LoewnerMORError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(LoewnerMORError, ZeroDivisionError):
    """Evaluation was requested exactly at a singular point."""


class EvaluationError(LoewnerMORError, ArithmeticError):
    """A transfer function could not be evaluated in floating point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DataError(LoewnerMORError, ValueError):
    """Interpolation data violates a structural requirement."""


class DegeneracyError(LoewnerMORError, ArithmeticError):
    """A pencil or linear system is numerically singular."""


class ConfigError(LoewnerMORError, ValueError):
    """An experiment configuration failed validation."""
