"""
Secular polynomial F_D(E, λ) = det(H_D(λ) - E·I).

At a fixed coupling the coefficients in E come from the Faddeev-LeVerrier
recursion, run with D extra guard digits. The symbolic-in-λ mode samples
that recursion at D + 1 points of the unit λ-circle and interpolates every
E-coefficient (a polynomial of degree <= D - k in λ).
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional

from mpmath import mp

from ..numerics.errors import CapacityError
from ..numerics.polynomial import Polynomial, circle_nodes, interpolate_values
from ..numerics.precision import PrecisionCtx, Scalar
from .matrix import ModelParams, ParityBasis, assemble

logger = logging.getLogger(__name__)

SYMBOLIC_MAX_SIZE = 16


@dataclass
class SecularPolynomial:
    """
    det(H_D - E·I) as a polynomial in E.

    Attributes:
        basis: Sector and size the polynomial belongs to.
        lam: Fixed coupling, or None in symbolic-in-λ mode.
        coeffs_in_E: Polynomial in E; coefficients are numbers at fixed λ and
                     Polynomials in λ in symbolic mode.
    """

    basis: ParityBasis
    lam: Optional[Scalar]
    coeffs_in_E: Polynomial

    @property
    def degree(self) -> int:
        return self.coeffs_in_E.degree

    @property
    def symbolic(self) -> bool:
        return self.lam is None

    def at(self, lam: Any) -> Polynomial:
        """Numeric polynomial in E at coupling λ (symbolic mode)."""
        if not self.symbolic:
            return self.coeffs_in_E
        return self.coeffs_in_E.evaluate_coefficients(lam)

    def in_lambda(self, E: Any) -> Polynomial:
        """F_D(E, ·) as a polynomial in λ (symbolic mode)."""
        result = Polynomial([])
        for k, coefficient in enumerate(self.coeffs_in_E.coeffs):
            term = coefficient if isinstance(coefficient, Polynomial) else Polynomial([coefficient])
            result = result + term * (E ** k)
        return result

    def __call__(self, E: Any, lam: Any = None) -> Any:
        polynomial = self.at(lam) if self.symbolic else self.coeffs_in_E
        return polynomial(E)

    def roots(self, ctx: PrecisionCtx, lam: Any = None) -> List[Scalar]:
        return self.at(lam).roots(ctx) if self.symbolic else self.coeffs_in_E.roots(ctx)


def faddeev_leverrier(matrix: Any, ctx: PrecisionCtx) -> List[Scalar]:
    """
    Ascending coefficients of det(A - E·I) for a square mp.matrix A.

    M_1 = I, c_{n-1} = -tr(A); M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    """
    size = matrix.rows
    with ctx.working(ctx.guard_digits + size):
        identity = mp.eye(size)
        charpoly = [mp.mpf(0)] * size + [mp.mpf(1)]
        work = mp.zeros(size, size)
        for k in range(1, size + 1):
            work = matrix * work + charpoly[size - k + 1] * identity
            product = matrix * work
            charpoly[size - k] = -sum(product[i, i] for i in range(size)) / k
        sign = -1 if size % 2 else 1
        return [sign * c for c in charpoly]


def secular_polynomial(basis: ParityBasis, lam: Any, ctx: PrecisionCtx) -> SecularPolynomial:
    """
    Characteristic polynomial of the RR matrix of ``basis``.

    Args:
        basis: Sector and size D.
        lam: Coupling (number or ModelParams), or None for symbolic-in-λ mode.
        ctx: Working precision.

    Raises:
        CapacityError: Symbolic mode with D above SYMBOLIC_MAX_SIZE.
    """
    if lam is not None:
        matrix = assemble(basis, lam, ctx)
        params = matrix.params
        return SecularPolynomial(basis, params.lam, Polynomial(faddeev_leverrier(matrix.entries, ctx)))

    size = basis.size
    if size > SYMBOLIC_MAX_SIZE:
        raise CapacityError(
            f"symbolic-in-lambda secular polynomial is capped at D={SYMBOLIC_MAX_SIZE}, got D={size}")

    nodes = circle_nodes(size + 1, 1, ctx)
    samples = [faddeev_leverrier(assemble(basis, ModelParams(z), ctx).entries, ctx) for z in nodes]
    coefficients = []
    for k in range(size + 1):
        coefficients.append(interpolate_values([row[k] for row in samples], 1, ctx, real=True))
    logger.debug("symbolic secular polynomial: %s sector, D=%d", basis.parity.value, size)
    return SecularPolynomial(basis, None, Polynomial(coefficients))
