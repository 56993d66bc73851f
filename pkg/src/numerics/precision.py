"""
Working-precision contract for all big-float arithmetic.

A PrecisionCtx is passed by value into every numerical routine; nothing in
the library reads or writes a precision setting that was not handed to it.
mpmath keeps its precision in process-global state, so routines enter
``ctx.working()`` (an ``mp.workdps`` block) around their arithmetic and
return to the caller's setting on exit.
"""

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Optional, Union

from mpmath import mp, mpc, mpf

from .errors import InvalidInputError, PrecisionError

Scalar = Union[mpf, mpc]
BigComplex = mpc

# Hankel determinants above this size need at least HANKEL_MIN_DIGITS.
HANKEL_GUARD_SIZE = 10
HANKEL_MIN_DIGITS = 30


def default_tolerance(digits: int) -> mpf:
    """Default Newton tolerance: 10^-min(digits - 10, 3*digits/4)."""
    exponent = min(digits - 10, (3 * digits) // 4)
    return mpf(10) ** (-exponent)


@dataclass(frozen=True)
class PrecisionCtx:
    """
    Working precision for a computation.

    Attributes:
        digits: Decimal working precision.
        max_newton_iters: Iteration cap shared by the Newton-type root finders.
        tol: Convergence threshold in units of the sought quantity. Defaults to
             default_tolerance(digits).
        guard_digits: Extra digits carried inside ``working()`` blocks.
    """

    digits: int = 30
    max_newton_iters: int = 60
    tol: Optional[Any] = None
    guard_digits: int = 10

    def __post_init__(self) -> None:
        if not isinstance(self.digits, int) or self.digits <= 0:
            raise InvalidInputError(f"digits must be a positive integer, got {self.digits!r}")
        if not isinstance(self.max_newton_iters, int) or self.max_newton_iters <= 0:
            raise InvalidInputError(
                f"max_newton_iters must be a positive integer, got {self.max_newton_iters!r}")
        if self.guard_digits < 0:
            raise InvalidInputError("guard_digits must be non-negative")

        tol = default_tolerance(self.digits) if self.tol is None else to_scalar(self.tol)
        if isinstance(tol, mpc) or tol <= 0:
            raise InvalidInputError(f"tol must be a positive real, got {self.tol!r}")
        # tolerance must sit at least 10 digits above the working precision
        floor = mpf(10) ** (-(self.digits - 10))
        if tol < floor * (1 - mpf(10) ** -8):
            raise PrecisionError(
                f"tol={mp.nstr(tol, 5)} is finer than 10^-(digits-10) for digits={self.digits}")
        object.__setattr__(self, "tol", tol)

    def working(self, extra: Optional[int] = None):
        """Context manager running mpmath at digits + guard (or + extra) decimal digits."""
        guard = self.guard_digits if extra is None else extra
        return mp.workdps(self.digits + guard)

    def with_digits(self, digits: int) -> "PrecisionCtx":
        """Copy of this context at another precision, with the default tolerance for it."""
        return replace(self, digits=digits, tol=None)

    @property
    def epsilon(self) -> mpf:
        return mpf(10) ** (-self.digits)

    @property
    def derivative_step(self) -> mpf:
        """Finite-difference step 10^(-digits/2)."""
        return mpf(10) ** (-(self.digits // 2))

    def check_hankel(self, size: int) -> None:
        """Refuse Hankel work of dimension > 10 below 30 digits."""
        if size > HANKEL_GUARD_SIZE and self.digits < HANKEL_MIN_DIGITS:
            raise PrecisionError(
                f"Hankel dimension D={size} needs at least {HANKEL_MIN_DIGITS} digits, "
                f"context has {self.digits}")

    def hankel_digits(self, size: int) -> int:
        """Internal precision for a Hankel determinant of dimension ``size``."""
        return max(self.digits + 20, math.ceil(2.5 * size) + 20)


def to_scalar(value: Any) -> Scalar:
    """Convert str/int/float/complex/Fraction/mpmath values to mpf or mpc."""
    if isinstance(value, (mpf, mpc)):
        return value
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        text = value.strip().replace(" ", "")
        if text.endswith(("j", "i")) and not text.lower().startswith(("nan", "inf")):
            return _parse_complex(text)
        return mpf(text)
    return mp.mpmathify(value)


def _parse_complex(text: str) -> mpc:
    # full-precision "a+bj" / "a-bj" parsing; complex() would truncate to doubles
    body = text[:-1]
    for index in range(len(body) - 1, 0, -1):
        if body[index] in "+-" and body[index - 1] not in "eE":
            return mpc(mpf(body[:index]), mpf(body[index:]))
    return mpc(0, mpf(body))


def is_complex(value: Any) -> bool:
    return isinstance(value, (mpc, complex))


def shared_digits(a: Scalar, b: Scalar, cap: int) -> int:
    """
    Number of leading decimal digits two values have in common, capped at ``cap``.

    Uses the relative difference |a - b| / max(|a|, |b|); identical values
    return ``cap``.
    """
    difference = abs(a - b)
    if difference == 0:
        return cap
    magnitude = max(abs(a), abs(b))
    if magnitude == 0:
        return 0
    digits = int(mp.floor(-mp.log10(difference / magnitude)))
    return max(0, min(cap, digits))
