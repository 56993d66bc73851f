"""
Hankel determinants H_D^d(E, λ) = |f_{i+j+d-1}|, i, j = 1..D.

Their roots in E approximate eigenvalues, their roots in λ at E = 0
critical couplings, and their common roots with ∂H/∂E exceptional points.
The determinants lose digits quickly with D, so they are evaluated at
max(digits + 20, 2.5·D + 20) decimal digits and refused outright for
D > 10 below 30 digits.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Sequence

from ..numerics.errors import InvalidInputError
from ..numerics.jets import Jet, JetAlgebra, jet_det
from ..numerics.linalg import bareiss_det, det
from ..numerics.precision import PrecisionCtx
from .riccati import riccati_coeffs, riccati_jets


@dataclass(frozen=True)
class HankelSpec:
    """Determinant dimension D >= 2 and displacement d >= 0."""

    D: int
    d: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.D, int) or self.D < 2:
            raise InvalidInputError(f"Hankel dimension D must be an integer >= 2, got {self.D!r}")
        if not isinstance(self.d, int) or self.d < 0:
            raise InvalidInputError(f"displacement d must be an integer >= 0, got {self.d!r}")

    @property
    def k_max(self) -> int:
        """Highest Riccati coefficient the determinant touches."""
        return 2 * self.D + self.d - 1

    def matrix(self, coeffs: Sequence[Any]) -> List[List[Any]]:
        return [[coeffs[i + j + self.d - 1] for j in range(1, self.D + 1)]
                for i in range(1, self.D + 1)]


def hankel_context(spec: HankelSpec, ctx: PrecisionCtx) -> PrecisionCtx:
    """Internal context for Hankel arithmetic; raises PrecisionError when ctx is too coarse."""
    ctx.check_hankel(spec.D)
    return ctx.with_digits(ctx.hankel_digits(spec.D))


def hankel(spec: HankelSpec, s: int, E: Any, lam: Any, ctx: PrecisionCtx) -> Any:
    """
    H_D^d(E, λ) for parity symbol s.

    Fraction/int inputs return the exact rational determinant; otherwise the
    value is a big-float (or big-complex) computed at the Hankel precision.
    """
    inner = hankel_context(spec, ctx)
    series = riccati_coeffs(s, E, lam, spec.k_max, inner)
    rows = spec.matrix(series.coeffs)
    if isinstance(series.coeffs[0], Fraction):
        return bareiss_det(rows)
    return det(rows, inner)


def hankel_jet(spec: HankelSpec, s: int, E: Any, lam: Any, ctx: PrecisionCtx,
               algebra: JetAlgebra) -> Jet:
    """H_D^d and its partial derivatives around (E, λ), as a jet of ``algebra``'s orders."""
    inner = hankel_context(spec, ctx)
    coeffs = riccati_jets(algebra, s, E, lam, spec.k_max, inner)
    with inner.working():
        return jet_det(algebra, spec.matrix(coeffs))
