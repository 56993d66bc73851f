"""
Taylor coefficients of the regularised logarithmic derivative.

For ψ'' = Q(x)ψ with Q(x) = Σ Q_k x^(2k), the function

    f(x) = s/x - ψ'(x)/ψ(x) = Σ f_k x^(2k+1)

satisfies f' + 2s f/x - f² + Q = 0 (using s² = s for s in {0, 1}), so

    (2k + 1 + 2s) f_k = Σ_{i+j=k-1} f_i f_j - Q_k.

The same recursion runs over exact Fractions, big-floats, big-complex values
and truncated Taylor jets in (δE, δλ).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List

from mpmath import mp

from ..numerics.errors import InvalidInputError
from ..numerics.jets import Jet, JetAlgebra
from ..numerics.precision import PrecisionCtx, to_scalar
from ..oscillator.matrix_elements import potential_series_coeffs


@dataclass
class RiccatiSeries:
    """Coefficients f_0..f_kmax of x^(2k+1) at fixed (E, λ)."""

    s: int
    E: Any
    lam: Any
    coeffs: List[Any]

    @property
    def k_max(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Any:
        return self.coeffs[k]


def _check(s: int, k_max: int) -> None:
    if s not in (0, 1):
        raise InvalidInputError(f"parity symbol s must be 0 or 1, got {s!r}")
    if not isinstance(k_max, int) or k_max < 0:
        raise InvalidInputError(f"k_max must be a non-negative integer, got {k_max!r}")


def _convolution(coeffs: List[Any], k: int, multiply, add) -> Any:
    """Σ_{i+j=k-1} f_i f_j using the symmetry of the sum."""
    top = k - 1
    total: Any = None
    for i in range((top + 1) // 2):
        term = multiply(coeffs[i], coeffs[top - i])
        total = term if total is None else add(total, term)
    if total is not None:
        total = add(total, total)
    if top % 2 == 0:
        middle = multiply(coeffs[top // 2], coeffs[top // 2])
        total = middle if total is None else add(total, middle)
    return total


def riccati_coeffs(s: int, E: Any, lam: Any, k_max: int, ctx: PrecisionCtx) -> RiccatiSeries:
    """
    f_0..f_kmax for parity symbol s at (E, λ).

    Integer or Fraction E and λ give exact Fraction coefficients; other
    inputs are evaluated at ctx precision.
    """
    _check(s, k_max)
    Q = potential_series_coeffs(E, lam, k_max, ctx)
    exact = isinstance(Q[0], Fraction)

    def multiply(a: Any, b: Any) -> Any:
        return a * b

    def add(a: Any, b: Any) -> Any:
        return a + b

    with ctx.working():
        coeffs: List[Any] = []
        for k in range(k_max + 1):
            source = -Q[k] if k == 0 else _convolution(coeffs, k, multiply, add) - Q[k]
            divisor = 2 * k + 1 + 2 * s
            coeffs.append(source / divisor if exact else source / mp.mpf(divisor))
    return RiccatiSeries(s, E, lam, coeffs)


def riccati_jets(algebra: JetAlgebra, s: int, E: Any, lam: Any, k_max: int,
                 ctx: PrecisionCtx) -> List[Jet]:
    """
    f_0..f_kmax as jets in (δE, δλ) around (E, λ).

    Carrying the expansion through the recursion gives every partial
    derivative the Hankel solvers need without finite differences.
    """
    _check(s, k_max)
    with ctx.working():
        E, lam = to_scalar(E), to_scalar(lam)
        energy = algebra.variable_E(E)
        coupling = algebra.variable_lambda(lam)

        Q: List[Jet] = [algebra.scale(algebra.add(energy, coupling), -2)]
        if k_max >= 1:
            Q.append(algebra.add(algebra.constant(1), algebra.scale(coupling, 2)))
        factorial = mp.mpf(1)
        for k in range(2, k_max + 1):
            factorial *= k
            Q.append(algebra.scale(coupling, (-2 * (-1) ** k) / factorial))

        coeffs: List[Jet] = []
        for k in range(k_max + 1):
            if k == 0:
                source = algebra.scale(Q[0], -1)
            else:
                source = algebra.sub(_convolution(coeffs, k, algebra.mul, algebra.add), Q[k])
            coeffs.append(algebra.scale(source, 1 / mp.mpf(2 * k + 1 + 2 * s)))
    return coeffs
