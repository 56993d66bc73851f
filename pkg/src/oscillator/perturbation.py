"""
Second-order perturbation polynomials for the two lowest levels.

    E_0(λ) ≈ 1/2 - λ/√2 - (ln(8 - 4√3)/2) λ²
    E_1(λ) ≈ 3/2 - (√2/4) λ - ((2√3 - 3[1 - ln(8 - 4√3)])/24) λ²

The constants stay symbolic (mpmath expressions) until evaluated at the
working precision of the caller.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

from mpmath import mp, mpf

from ..numerics.errors import InvalidInputError
from ..numerics.precision import PrecisionCtx, Scalar, to_scalar


def _log_term():
    return mp.log(8 - 4 * mp.sqrt(3))


def _default_terms() -> Dict[int, Tuple[Callable[[], mpf], ...]]:
    return {
        0: (lambda: mpf(1) / 2,
            lambda: -1 / mp.sqrt(2),
            lambda: -_log_term() / 2),
        1: (lambda: mpf(3) / 2,
            lambda: -mp.sqrt(2) / 4,
            lambda: -(2 * mp.sqrt(3) - 3 * (1 - _log_term())) / 24),
    }


@dataclass(frozen=True)
class PTPolynomials:
    """Coefficients (E_n0, E_n1, E_n2) for n in {0, 1}, kept as deferred expressions."""

    terms: Dict[int, Tuple[Callable[[], mpf], ...]] = field(default_factory=_default_terms)

    def coefficients(self, n: int, ctx: PrecisionCtx) -> Tuple[mpf, mpf, mpf]:
        if n not in self.terms:
            raise InvalidInputError(f"perturbation polynomials exist for n in {{0, 1}}, got {n}")
        with ctx.working():
            return tuple(term() for term in self.terms[n])


PT_POLYNOMIALS = PTPolynomials()


def pt_energy(n: int, lam: object, ctx: PrecisionCtx = PrecisionCtx()) -> Scalar:
    """Evaluate the second-degree perturbation polynomial of level n at λ."""
    e0, e1, e2 = PT_POLYNOMIALS.coefficients(n, ctx)
    with ctx.working():
        lam = to_scalar(lam)
        return e0 + e1 * lam + e2 * lam ** 2


def pt_critical_lambda(n: int, ctx: PrecisionCtx = PrecisionCtx()) -> mpf:
    """Positive root of E_n^PT(λ) = 0, the perturbative critical coupling."""
    e0, e1, e2 = PT_POLYNOMIALS.coefficients(n, ctx)
    with ctx.working():
        # e2 < 0 and e0 > 0, so exactly one root is positive
        return (-e1 - mp.sqrt(e1 ** 2 - 4 * e0 * e2)) / (2 * e2)
