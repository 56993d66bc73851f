"""
Critical couplings from the Rayleigh-Ritz matrices.

λ_n^c(D) solves det(H_D(λ)) = 0, i.e. F_D(0, λ) = 0, on the branch where the
n-th level crosses zero. The derivative in λ comes from a first-order jet
carried through the determinant.
"""

import logging
from typing import Any, List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from ..numerics.errors import BranchLossError, ConvergenceError, InvalidInputError, MonotonicityError
from ..numerics.jets import JetAlgebra, jet_det
from ..numerics.precision import PrecisionCtx, to_scalar
from ..numerics.roots import newton_1d, split_evaluation
from ..oscillator.matrix_elements import gaussian_matrix_element, h0_matrix_element
from ..oscillator.perturbation import pt_critical_lambda
from .eigen import eigenvalues
from .matrix import ParityBasis, assemble

logger = logging.getLogger(__name__)

SCAN_STEP = mpf(1) / 2
SCAN_LIMIT = 200


def determinant_in_lambda(basis: ParityBasis, ctx: PrecisionCtx):
    """Return λ -> (det H_D(λ), d/dλ det H_D(λ)) at E = 0."""
    algebra = JetAlgebra(order_E=0, order_lambda=1)
    labels = basis.quantum_numbers

    def evaluate(lam: Any) -> Tuple[Any, Any]:
        with ctx.working():
            rows = []
            for pi in labels:
                row = []
                for pj in labels:
                    g = gaussian_matrix_element(pi, pj, ctx)
                    row.append([h0_matrix_element(pi, pj) - lam * g, -g])
                rows.append(row)
            jet = jet_det(algebra, rows)
            return jet[0], jet[algebra.index(0, 1)]

    return evaluate


def _scan_seed(n: int, size: int, ctx: PrecisionCtx) -> mpf:
    """Bracket the zero crossing of E_n^[D](λ) on λ > 0 and bisect it coarsely."""
    basis = ParityBasis.for_state(n, size)
    index = basis.local_index(n)

    def level(lam: Any) -> mpf:
        return eigenvalues(assemble(basis, lam, ctx), ctx)[index]

    low = mpf(0)
    high = SCAN_STEP
    for _ in range(SCAN_LIMIT):
        if level(high) < 0:
            break
        low, high = high, high + SCAN_STEP
    else:
        raise ConvergenceError(f"E_{n} does not cross zero for lambda <= {SCAN_LIMIT * SCAN_STEP}")
    for _ in range(30):
        middle = (low + high) / 2
        if level(middle) > 0:
            low = middle
        else:
            high = middle
    return (low + high) / 2


def critical_lambda_rr(n: int, schedule: Sequence[int], ctx: PrecisionCtx,
                       seed: Optional[Any] = None) -> List[Tuple[int, mpf]]:
    """
    λ_n^c(D) for each basis size D in ``schedule``.

    Args:
        n: Global state index.
        schedule: Basis sizes, solved in ascending order, each seeded from the
                  previous root.
        ctx: Working precision.
        seed: Starting coupling; defaults to the perturbative root for n <= 1
              and to a bracketing scan otherwise.

    Returns:
        List of (D, λ_n^c(D)), non-increasing in D.

    Raises:
        BranchLossError: If a root leaves λ > 0 or belongs to another level.
        MonotonicityError: If the sequence increases with D.
    """
    if n < 0:
        raise InvalidInputError(f"state index must be non-negative, got {n}")
    sizes = sorted(size for size in set(schedule) if size > n // 2)
    if not sizes:
        raise InvalidInputError(f"schedule {list(schedule)} has no basis large enough for state {n}")

    if seed is not None:
        current = to_scalar(seed)
    elif n <= 1:
        current = pt_critical_lambda(n, ctx)
    else:
        current = _scan_seed(n, sizes[0], ctx)

    ladder: List[Tuple[int, mpf]] = []
    slack = mpf(10) ** (-(ctx.digits // 2))
    for size in sizes:
        basis = ParityBasis.for_state(n, size)
        determinant, slope = split_evaluation(determinant_in_lambda(basis, ctx), 2)
        result = newton_1d(determinant, current, ctx, fprime=slope, scale=abs(slope(current)))
        root = result.root
        if root <= 0:
            raise BranchLossError(f"critical coupling for n={n} left lambda > 0 at D={size}",
                                  last_iterate=root, ladder=ladder)

        levels = eigenvalues(assemble(basis, root, ctx), ctx)
        index = basis.local_index(n)
        nearest = min(range(len(levels)), key=lambda i: abs(levels[i]))
        if nearest != index:
            raise BranchLossError(
                f"root {mp.nstr(root, 12)} zeroes level {nearest} of the sector, not {index}",
                last_iterate=root, ladder=ladder)

        if ladder and root > ladder[-1][1] + slack:
            raise MonotonicityError(
                f"lambda_{n}^c rose from {mp.nstr(ladder[-1][1], 20)} to {mp.nstr(root, 20)} at D={size}")
        ladder.append((size, root))
        logger.debug("rr critical n=%d D=%d lambda=%s (%d iterations)",
                     n, size, mp.nstr(root, 25), result.iterations)
        current = root

    return ladder
