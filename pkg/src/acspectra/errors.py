"""Exception taxonomy shared by all acspectra modules.

The CLI maps these onto exit codes: configuration problems exit 1,
physical-regime rejections exit 2, numerical failures exit 3.
"""

from __future__ import annotations


class AcSpectraError(Exception):
    """Base class for every error raised by this package."""


class DomainError(AcSpectraError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at (or too close to) a pole."""


class GridError(DomainError):
    """A sampling grid is unusable (too few points, too closely spaced, ...)."""


class OverflowLogError(AcSpectraError, ArithmeticError):
    """A result exceeds the double range; carries the signed-log value."""

    def __init__(self, message: str, log_magnitude: float, sign: int):
        super().__init__(f"{message} (log magnitude {log_magnitude:.6g}, sign {sign:+d})")
        self.log_magnitude = log_magnitude
        self.sign = sign


class RegimeError(AcSpectraError, ValueError):
    """The physical parameters violate a bound-state regime condition."""


class BoundaryError(AcSpectraError, ValueError):
    """The effective angular order sits on (or too near) a sector boundary."""


class DegenerateError(AcSpectraError, ValueError):
    """A formula degenerates (division by zero in a coupling combination)."""


class ConvergenceError(AcSpectraError, RuntimeError):
    """An iterative routine failed to converge within its budget."""


class NoSignChangeError(ConvergenceError):
    """A root scan found no sign change inside the expected interval."""
