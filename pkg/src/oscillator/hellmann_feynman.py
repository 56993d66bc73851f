"""
Hellmann-Feynman consistency check: dE_n/dλ = -⟨ψ_n|exp(-x²)|ψ_n⟩.
"""

import logging
from typing import Any, Callable, Sequence, Tuple

from mpmath import mp, mpf

from ..numerics.errors import InvalidInputError
from ..numerics.precision import PrecisionCtx, to_scalar
from .matrix_elements import gaussian_matrix_element

logger = logging.getLogger(__name__)

# solver(n, λ) -> (E_n(λ), normalised coefficient vector, global quantum numbers of the basis)
EigenOracle = Callable[[int, Any], Tuple[Any, Sequence[Any], Sequence[int]]]


def gaussian_expectation(vector: Sequence[Any], quantum_numbers: Sequence[int],
                         ctx: PrecisionCtx) -> mpf:
    """⟨ψ|exp(-x²)|ψ⟩ for ψ = Σ v_i φ_{p(i)}."""
    with ctx.working():
        total = mpf(0)
        for i, (vi, pi) in enumerate(zip(vector, quantum_numbers)):
            total += vi * vi * gaussian_matrix_element(pi, pi, ctx)
            for vj, pj in zip(vector[i + 1:], quantum_numbers[i + 1:]):
                total += 2 * vi * vj * gaussian_matrix_element(pi, pj, ctx)
        return total


def hft_residual(n: int, lam: Any, h: Any, solver: EigenOracle, ctx: PrecisionCtx) -> mpf:
    """
    Mismatch between the finite-difference slope and the Hellmann-Feynman value.

    Args:
        n: Global state index.
        lam: Coupling λ.
        h: Central-difference half-width (> 0).
        solver: Eigen oracle returning energy, eigenvector and basis labels.
        ctx: Working precision.

    Returns:
        |(E_n(λ+h) - E_n(λ-h)) / (2h) + ⟨ψ_n|exp(-x²)|ψ_n⟩|
    """
    with ctx.working():
        h = to_scalar(h)
        lam = to_scalar(lam)
        if h <= 0:
            raise InvalidInputError(f"step h must be positive, got {h}")
        upper, _, _ = solver(n, lam + h)
        lower, _, _ = solver(n, lam - h)
        _, vector, labels = solver(n, lam)
        slope = (upper - lower) / (2 * h)
        expectation = gaussian_expectation(vector, labels, ctx)
        residual = abs(slope + expectation)
    logger.debug("hft n=%d lambda=%s slope=%s <exp(-x^2)>=%s residual=%.3e",
                 n, mp.nstr(lam, 10), mp.nstr(slope, 15), mp.nstr(expectation, 15), float(residual))
    return residual
