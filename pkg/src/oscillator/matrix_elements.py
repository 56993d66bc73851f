"""
Matrix elements of the Gaussian-perturbed oscillator.

The model is H = H_0 + λV with H_0 = -(1/2)d²/dx² + (1/2)x² and
V(x) = -exp(-x²). The basis is the unit-frequency H_0 eigenbasis with
standard Hermite normalisation:

    φ_n(x) = (2^n n! √π)^(-1/2) H_n(x) exp(-x²/2)

so that ⟨m|exp(-x²)|n⟩ has the closed form

    (-1)^((m-n)/2) Γ((m+n+1)/2) / sqrt(2π m! n!)     (m + n even)

and vanishes when m + n is odd. A Gauss-Hermite path is kept alongside for
cross-checking.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Any, List, Tuple

from mpmath import mp, mpf

from ..numerics.errors import InvalidInputError
from ..numerics.precision import PrecisionCtx, to_scalar

logger = logging.getLogger(__name__)

# node headroom over m + n for the quadrature path
QUADRATURE_HEADROOM = 40


def _check_indices(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise InvalidInputError(f"basis indices must be non-negative, got ({m}, {n})")


@lru_cache(maxsize=None)
def _gaussian_closed_form(m: int, n: int, digits: int) -> mpf:
    with mp.workdps(digits):
        sign = -1 if ((abs(m - n) // 2) % 2) else 1
        value = mp.gamma(mpf(m + n + 1) / 2) / mp.sqrt(2 * mp.pi * mp.factorial(m) * mp.factorial(n))
        return sign * value


def gaussian_matrix_element(m: int, n: int, ctx: PrecisionCtx) -> mpf:
    """
    ⟨m|exp(-x²)|n⟩ in the H_0 eigenbasis.

    Args:
        m: Basis index.
        n: Basis index.
        ctx: Working precision; values are cached per (m, n, digits).

    Returns:
        The matrix element; exactly zero when m + n is odd.

    Raises:
        InvalidInputError: For a negative index.
    """
    _check_indices(m, n)
    if (m + n) % 2:
        return mpf(0)
    low, high = min(m, n), max(m, n)
    return _gaussian_closed_form(low, high, ctx.digits + ctx.guard_digits)


@lru_cache(maxsize=32)
def _hermite_rule(nodes: int, digits: int) -> Tuple[List[mpf], List[mpf]]:
    with mp.workdps(digits):
        points, weights = mp.gauss_quadrature(nodes, "hermite")
        return [points[i] for i in range(nodes)], [weights[i] for i in range(nodes)]


def gaussian_matrix_element_quadrature(m: int, n: int, ctx: PrecisionCtx,
                                       nodes: int = 0) -> mpf:
    """
    ⟨m|exp(-x²)|n⟩ by Gauss-Hermite quadrature.

    The integrand is N_m N_n H_m(x) H_n(x) exp(-2x²); with y = √2 x it becomes
    a polynomial of degree m + n against the Hermite weight, which a rule of
    (m + n)/2 + 1 nodes integrates exactly. ``nodes`` is raised to at least
    m + n + 40.
    """
    _check_indices(m, n)
    count = max(nodes, m + n + QUADRATURE_HEADROOM)
    digits = ctx.digits + ctx.guard_digits + (m + n) // 2
    points, weights = _hermite_rule(count, digits)
    with mp.workdps(digits):
        norm = 1 / mp.sqrt(mpf(2) ** (m + n) * mp.factorial(m) * mp.factorial(n) * mp.pi)
        root2 = mp.sqrt(2)
        total = mp.fsum(w * mp.hermite(m, y / root2) * mp.hermite(n, y / root2)
                        for y, w in zip(points, weights))
        return norm * total / root2


def h0_matrix_element(m: int, n: int) -> mpf:
    """⟨m|H_0|n⟩ = (n + 1/2) δ_mn."""
    _check_indices(m, n)
    return mpf(n) + mpf(1) / 2 if m == n else mpf(0)


def _is_exact(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def potential_series_coeffs(E: Any, lam: Any, k_max: int, ctx: PrecisionCtx) -> List[Any]:
    """
    Taylor coefficients Q_k of Q(x) = x² - 2λ exp(-x²) - 2E in powers of x².

    Q_0 = -2E - 2λ, Q_1 = 1 + 2λ and Q_k = -2λ(-1)^k / k! for k >= 2. Integer
    or Fraction inputs give exact Fractions; anything else is evaluated in
    mpmath at ctx precision.
    """
    if not isinstance(k_max, int) or k_max < 0:
        raise InvalidInputError(f"k_max must be a non-negative integer, got {k_max!r}")

    if _is_exact(E) and _is_exact(lam):
        E, lam = Fraction(E), Fraction(lam)
        coeffs: List[Any] = [-2 * E - 2 * lam, 1 + 2 * lam]
        factorial = 1
        for k in range(2, k_max + 1):
            factorial *= k
            coeffs.append(lam * Fraction(-2 * (-1) ** k, factorial))
        return coeffs[:k_max + 1]

    with ctx.working():
        E, lam = to_scalar(E), to_scalar(lam)
        coeffs = [-2 * E - 2 * lam, 1 + 2 * lam]
        factorial = mpf(1)
        for k in range(2, k_max + 1):
            factorial *= k
            coeffs.append(lam * (-2 * (-1) ** k) / factorial)
        return coeffs[:k_max + 1]
