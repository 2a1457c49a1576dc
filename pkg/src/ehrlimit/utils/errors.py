"""
Error types raised by the ehrlimit library.

The library only raises; ``ehrlimit.main`` maps these onto exit codes.
"""

__all__ = [
    'EhrlimitError',
    'ParameterError',
    'DegenerateSimplexError',
    'UnsupportedFormError',
    'PreconditionError',
    'TruncationError',
    'BudgetExceededError',
    'CertificationError',
    'OracleScaleError',
]


class EhrlimitError(Exception):
    """Base class for all library errors."""


class ParameterError(EhrlimitError, ValueError):
    """A family parameter or argument is out of range."""


class DegenerateSimplexError(EhrlimitError, ValueError):
    """Vertices are not affinely independent."""


class UnsupportedFormError(EhrlimitError, ValueError):
    """The input is not in a form the requested operation handles."""


class PreconditionError(EhrlimitError, ValueError):
    """A mathematical precondition (origin interior, gcd, reflexivity) fails."""


class TruncationError(EhrlimitError, ValueError):
    """A series prefix is too short for the requested comparison."""


class BudgetExceededError(EhrlimitError, RuntimeError):
    """An enumeration would visit more parallelepiped points than allowed."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"Enumeration needs {required} parallelepiped points, budget is {budget}"
        )


class CertificationError(EhrlimitError, RuntimeError):
    """A certified coefficient disagreed with a later evaluation."""


class OracleScaleError(EhrlimitError, ValueError):
    """The dilate-counting oracle was asked for more than it is meant to handle."""
