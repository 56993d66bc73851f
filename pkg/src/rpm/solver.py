"""
Riccati-Pade root solvers and D-ladders.

Each solver differentiates the Hankel determinant through a jet in
(δE, δλ), so Newton's method gets exact derivatives:

    solve_E               H(E) = 0 at fixed λ         multiplicity-robust Newton
    solve_critical_lambda H(0, λ) = 0                 multiplicity-robust Newton
    solve_ep              H = ∂H/∂E = 0 in (E, λ)      2-D Newton

The ladders repeat a solve over growing D, seeding every rung from the
previous one, and report how many leading digits the last two rungs share.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Generic, List, Optional, Sequence, Tuple, TypeVar

from mpmath import mp, mpf

from ..numerics.errors import BranchLossError, ConvergenceError
from ..numerics.jets import JetAlgebra
from ..numerics.precision import PrecisionCtx, Scalar, shared_digits, to_scalar
from ..numerics.roots import newton_1d, newton_2d, split_evaluation
from ..rayleigh_ritz.exceptional import ExceptionalPoint
from ..rayleigh_ritz.matrix import Parity
from .hankel import HankelSpec, hankel_jet

logger = logging.getLogger(__name__)

BASIN_RADIUS = mpf(1) / 2
DEFAULT_LADDER = (10, 15, 20, 30, 40, 60)
DEFAULT_EP_LADDER = (10, 15, 20, 30, 40)

T = TypeVar("T")


@dataclass
class LadderResult(Generic[T]):
    """
    Results of one solve repeated over growing Hankel dimension.

    Attributes:
        rungs: (D, result) pairs in the order solved.
        converged_digits: Leading digits shared by the last two rungs.
    """

    rungs: List[Tuple[int, T]]
    converged_digits: int

    @property
    def value(self) -> T:
        return self.rungs[-1][1]

    @property
    def size(self) -> int:
        return self.rungs[-1][0]


def _energy_derivatives(spec: HankelSpec, s: int, lam: Any, ctx: PrecisionCtx):
    algebra = JetAlgebra(order_E=2, order_lambda=0)

    def evaluate(E: Any) -> Tuple[Any, Any, Any]:
        jet = hankel_jet(spec, s, E, lam, ctx, algebra)
        return jet[0], jet[algebra.index(1, 0)], 2 * jet[algebra.index(2, 0)]

    return evaluate


def _coupling_derivatives(spec: HankelSpec, s: int, E: Any, ctx: PrecisionCtx):
    algebra = JetAlgebra(order_E=0, order_lambda=2)

    def evaluate(lam: Any) -> Tuple[Any, Any, Any]:
        jet = hankel_jet(spec, s, E, lam, ctx, algebra)
        return jet[0], jet[algebra.index(0, 1)], 2 * jet[algebra.index(0, 2)]

    return evaluate


def _check_basin(root: Any, seed: Any, what: str, last: Any = None) -> None:
    if abs(root - seed) > BASIN_RADIUS:
        raise BranchLossError(
            f"{what} converged to {mp.nstr(root, 12)}, more than {BASIN_RADIUS} from seed "
            f"{mp.nstr(seed, 12)}", last_iterate=root if last is None else last)


def solve_E(spec: HankelSpec, s: int, lam: Any, E_seed: Any, ctx: PrecisionCtx) -> Scalar:
    """
    Root in E of H_D^d(E, λ) near ``E_seed``.

    Raises:
        PrecisionError: D > 10 with fewer than 30 digits.
        BranchLossError: Root farther than 0.5 from the seed.
        ConvergenceError: Newton failure.
    """
    with ctx.working():
        lam, E_seed = to_scalar(lam), to_scalar(E_seed)
    f, fprime, fsecond = split_evaluation(_energy_derivatives(spec, s, lam, ctx), 3)
    result = newton_1d(f, E_seed, ctx, fprime=fprime, fsecond=fsecond, robust=True)
    _check_basin(result.root, E_seed, f"E (s={s}, D={spec.D})")
    logger.debug("solve_E s=%d D=%d d=%d lambda=%s -> %s in %d iterations",
                 s, spec.D, spec.d, mp.nstr(lam, 10), mp.nstr(result.root, 25), result.iterations)
    return result.root


def solve_critical_lambda(spec: HankelSpec, s: int, lam_seed: Any, ctx: PrecisionCtx) -> Scalar:
    """
    Root in λ of H_D^d(0, λ) near ``lam_seed``.

    Raises:
        BranchLossError: Root farther than 0.5 from the seed or not positive.
    """
    with ctx.working():
        lam_seed = to_scalar(lam_seed)
    f, fprime, fsecond = split_evaluation(_coupling_derivatives(spec, s, mpf(0), ctx), 3)
    result = newton_1d(f, lam_seed, ctx, fprime=fprime, fsecond=fsecond, robust=True)
    root = result.root
    _check_basin(root, lam_seed, f"critical lambda (s={s}, D={spec.D})")
    if mp.re(root) <= 0:
        raise BranchLossError(f"critical coupling left lambda > 0: {mp.nstr(root, 12)}",
                              last_iterate=root)
    logger.debug("solve_critical_lambda s=%d D=%d d=%d -> %s in %d iterations",
                 s, spec.D, spec.d, mp.nstr(root, 25), result.iterations)
    return root


def solve_ep(spec: HankelSpec, s: int, seed: Tuple[Any, Any], ctx: PrecisionCtx) -> ExceptionalPoint:
    """
    Exceptional point from H_D^d = 0 and ∂H_D^d/∂E = 0, seeded at (E, λ).

    Residuals are scaled by the Jacobian row norms at the seed.

    Raises:
        SingularJacobianError: Jacobian singular during the iteration.
        BranchLossError: λ drifts farther than 2|λ_seed| from the seed.
        ConvergenceError: Newton failure.
    """
    algebra = JetAlgebra(order_E=2, order_lambda=1)

    def evaluate(E: Any, lam: Any):
        jet = hankel_jet(spec, s, E, lam, ctx, algebra)
        H = jet[0]
        H_E = jet[algebra.index(1, 0)]
        H_EE = 2 * jet[algebra.index(2, 0)]
        H_L = jet[algebra.index(0, 1)]
        H_EL = jet[algebra.index(1, 1)]
        return (H, H_E), [[H_E, H_L], [H_EE, H_EL]]

    values, jacobian = split_evaluation(evaluate, 2)
    with ctx.working():
        E_seed, lam_seed = to_scalar(seed[0]), to_scalar(seed[1])
        rows = jacobian(E_seed, lam_seed)
        scales = tuple(mp.sqrt(abs(a) ** 2 + abs(b) ** 2) for a, b in rows)

    result = newton_2d(values, (E_seed, lam_seed), ctx, jacobian=jacobian, scales=scales)
    E, lam = result.x, result.y
    if abs(lam - lam_seed) > 2 * abs(lam_seed):
        raise BranchLossError(
            f"exceptional point drifted to lambda={mp.nstr(lam, 12)} from seed {mp.nstr(lam_seed, 12)}",
            last_iterate=(E, lam), iterations=result.iterations)
    logger.debug("solve_ep s=%d D=%d -> lambda=%s E=%s in %d iterations",
                 s, spec.D, mp.nstr(lam, 20), mp.nstr(E, 20), result.iterations)
    return ExceptionalPoint(Parity.parse(s), None, lam, E, result.residuals, spec.D)


def _run_ladder(solve: Callable[[HankelSpec, Any], T], key: Callable[[T], Any], seed: Any,
                sizes: Sequence[int], d: int, ctx: PrecisionCtx, target_digits: Optional[int],
                label: str) -> LadderResult[T]:
    rungs: List[Tuple[int, T]] = []
    converged = 0
    current = seed
    for size in sorted(set(sizes)):
        try:
            result = solve(HankelSpec(size, d), current)
        except ConvergenceError as exc:
            exc.ladder = [(D, key(value)) for D, value in rungs]
            raise
        if rungs:
            converged = shared_digits(key(result), key(rungs[-1][1]), ctx.digits)
        rungs.append((size, result))
        logger.info("%s: D=%d value=%s shared digits=%d",
                    label, size, mp.nstr(key(result), 30), converged)
        current = result
        if target_digits is not None and converged >= target_digits:
            break
    return LadderResult(rungs, converged)


def ladder_E(s: int, lam: Any, E_seed: Any, ctx: PrecisionCtx,
             sizes: Sequence[int] = DEFAULT_LADDER, d: int = 0,
             target_digits: Optional[int] = None) -> LadderResult[Scalar]:
    """solve_E over growing D."""
    return _run_ladder(lambda spec, seed: solve_E(spec, s, lam, seed, ctx), lambda v: v,
                       E_seed, sizes, d, ctx, target_digits, f"ladder_E s={s}")


def ladder_critical_lambda(s: int, lam_seed: Any, ctx: PrecisionCtx,
                           sizes: Sequence[int] = DEFAULT_LADDER, d: int = 0,
                           target_digits: Optional[int] = None) -> LadderResult[Scalar]:
    """solve_critical_lambda over growing D."""
    return _run_ladder(lambda spec, seed: solve_critical_lambda(spec, s, seed, ctx), lambda v: v,
                       lam_seed, sizes, d, ctx, target_digits, f"ladder_critical s={s}")


def ladder_ep(s: int, seed: Tuple[Any, Any], ctx: PrecisionCtx,
              sizes: Sequence[int] = DEFAULT_EP_LADDER, d: int = 0,
              target_digits: Optional[int] = None) -> LadderResult[ExceptionalPoint]:
    """solve_ep over growing D; shared digits are measured on λ."""

    def solve(spec: HankelSpec, current: Any) -> ExceptionalPoint:
        start = current if isinstance(current, tuple) else (current.energy, current.lam)
        return solve_ep(spec, s, start, ctx)

    ladder = _run_ladder(solve, lambda ep: ep.lam, tuple(seed), sizes, d, ctx, target_digits,
                         f"ladder_ep s={s}")
    ladder.value.converged_digits = ladder.converged_digits
    return ladder
