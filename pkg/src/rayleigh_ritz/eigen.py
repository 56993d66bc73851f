"""
Eigen-solution of Rayleigh-Ritz matrices and basis-size convergence.

Real couplings go through mpmath's symmetric tridiagonal QL solver
(``mp.eigsy``). Complex couplings produce complex-symmetric matrices, which
are solved through the roots of the secular polynomial instead.

Variational bounds are checked as the basis grows: for a fixed state and
coupling the energy never increases with D.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from mpmath import mp, mpf

from ..numerics.errors import (ConvergenceError, InvalidInputError, MonotonicityError,
                               PrecisionError)
from ..numerics.precision import PrecisionCtx, Scalar, shared_digits, to_scalar
from .matrix import ModelParams, Parity, ParityBasis, RRMatrix, assemble

logger = logging.getLogger(__name__)

DEFAULT_SCHEDULE = (10, 20, 40, 80, 160)


class Method(Enum):
    RR = "RR"
    RPM = "RPM"
    PT = "PT"

    @classmethod
    def parse(cls, value: Any) -> "Method":
        if isinstance(value, Method):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise InvalidInputError(f"unknown method {value!r}; use RR, RPM or PT") from None


@dataclass
class SpectralPoint:
    """Energy of state n at coupling λ from one method and basis size."""

    n: int
    lam: Scalar
    energy: Scalar
    basis_size: Optional[int]
    method: Method
    converged_digits: Optional[int] = None


def eigenvalues(matrix: RRMatrix, ctx: PrecisionCtx,
                vectors: bool = False) -> Union[List[mpf], Tuple[List[mpf], List[List[mpf]]]]:
    """
    All eigenvalues of a real-symmetric RR matrix in ascending order.

    Args:
        matrix: Assembled matrix at real λ.
        ctx: Working precision.
        vectors: Also return normalised eigenvectors (one list per eigenvalue).

    Raises:
        InvalidInputError: If the matrix is complex or not symmetric.
    """
    if matrix.is_complex:
        raise InvalidInputError("complex coupling: use complex_eigenvalues()")
    if not matrix.is_symmetric():
        raise InvalidInputError("eigenvalues() needs a symmetric matrix")

    with ctx.working():
        real_entries = matrix.entries.apply(mp.re)
        if not vectors:
            values = mp.eigsy(real_entries, eigvals_only=True)
            return [values[i] for i in range(matrix.size)]
        values, basis = mp.eigsy(real_entries)
        columns = [[basis[r, c] for r in range(matrix.size)] for c in range(matrix.size)]
        return [values[i] for i in range(matrix.size)], columns


def complex_eigenvalues(matrix: RRMatrix, ctx: PrecisionCtx) -> List[Scalar]:
    """Eigenvalues at complex λ from the roots of det(H_D - E·I), sorted by (Re, Im)."""
    from .secular import secular_polynomial

    polynomial = secular_polynomial(matrix.basis, matrix.params, ctx)
    roots = polynomial.roots(ctx)
    return sorted(roots, key=lambda z: (mp.re(z), mp.im(z)))


def _rungs(first: int, schedule: Iterable[int]) -> List[int]:
    return [first] + sorted(size for size in set(schedule) if size > first)


def converge_states(ns: Sequence[int], lam: Any, target_digits: int, ctx: PrecisionCtx,
                    schedule: Sequence[int] = DEFAULT_SCHEDULE) -> Dict[int, SpectralPoint]:
    """
    Converge several states at one coupling, sharing each eigen-solution.

    For every parity sector the basis grows from the smallest size holding
    the highest requested state through ``schedule``. A state is converged
    once two successive energies differ by less than 10^-target_digits.

    Returns:
        Mapping from state index to its converged SpectralPoint.

    Raises:
        PrecisionError: If target_digits is not below ctx.digits.
        MonotonicityError: If an energy increases with D beyond 10^(-digits/2).
        ConvergenceError: If the schedule is exhausted; carries the ladder.
    """
    if any(n < 0 for n in ns):
        raise InvalidInputError(f"state indices must be non-negative, got {list(ns)}")
    if target_digits >= ctx.digits:
        raise PrecisionError(f"target_digits={target_digits} needs more than {ctx.digits} digits")

    results: Dict[int, SpectralPoint] = {}
    with ctx.working():
        params = lam if isinstance(lam, ModelParams) else ModelParams(lam)
        threshold = mpf(10) ** (-target_digits)
        slack = mpf(10) ** (-(ctx.digits // 2))
    if params.is_complex:
        raise InvalidInputError("converge_state works on real couplings")

    for parity in Parity:
        wanted = sorted({n for n in ns if Parity.of_state(n) is parity})
        if not wanted:
            continue
        locals_ = {n: n // 2 for n in wanted}
        first = max(locals_.values()) + 1
        ladders: Dict[int, List[Tuple[int, Scalar]]] = {n: [] for n in wanted}

        for size in _rungs(first, schedule):
            pending = [n for n in wanted if n not in results]
            if not pending:
                break
            values = eigenvalues(assemble(ParityBasis(parity, size), params, ctx), ctx)
            for n in pending:
                energy = values[locals_[n]]
                ladder = ladders[n]
                if params.lam == 0:
                    # H_D is diagonal at λ = 0, every rung is exact
                    results[n] = SpectralPoint(n, params.lam, energy, size, Method.RR, ctx.digits)
                    ladder.append((size, energy))
                    continue
                if ladder:
                    previous = ladder[-1][1]
                    if energy > previous + slack:
                        raise MonotonicityError(
                            f"E_{n} rose from {mp.nstr(previous, 20)} to {mp.nstr(energy, 20)} "
                            f"between D={ladder[-1][0]} and D={size} at lambda={mp.nstr(params.lam, 10)}")
                    if abs(energy - previous) < threshold:
                        results[n] = SpectralPoint(n, params.lam, energy, size, Method.RR,
                                                   shared_digits(energy, previous, ctx.digits))
                ladder.append((size, energy))
                logger.debug("rr ladder n=%d D=%d E=%s", n, size, mp.nstr(energy, 20))

        unresolved = [n for n in wanted if n not in results]
        if unresolved:
            n = unresolved[0]
            raise ConvergenceError(
                f"E_{n}(lambda={mp.nstr(params.lam, 10)}) not converged to {target_digits} digits "
                f"by D={ladders[n][-1][0]}",
                last_iterate=ladders[n][-1][1], iterations=len(ladders[n]), ladder=ladders[n])

    return results


def converge_state(n: int, lam: Any, target_digits: int, ctx: PrecisionCtx,
                   schedule: Sequence[int] = DEFAULT_SCHEDULE) -> SpectralPoint:
    """Converge a single state; see converge_states."""
    return converge_states([n], lam, target_digits, ctx, schedule)[n]


def state_oracle(size: int, ctx: PrecisionCtx):
    """
    Fixed-size eigen oracle for the Hellmann-Feynman check.

    Returns a callable (n, λ) -> (E_n, eigenvector, quantum numbers).
    """

    def solve(n: int, lam: Any):
        basis = ParityBasis.for_state(n, size)
        values, vectors = eigenvalues(assemble(basis, to_scalar(lam), ctx), ctx, vectors=True)
        index = basis.local_index(n)
        return values[index], vectors[index], basis.quantum_numbers

    return solve
