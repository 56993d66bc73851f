"""
Exceptional points: complex couplings where two levels of one sector coalesce.

Seeds come from the discriminant of the secular polynomial with respect to E,
which vanishes exactly where F_D(E, λ) has a double root. The discriminant is
evaluated on a grid over a rectangle of the complex λ-plane, its local minima
in modulus are polished by Newton's method, and each root is paired with the
double-root energy.
"""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp, mpc, mpf
from scipy.ndimage import minimum_filter
from scipy.optimize import linear_sum_assignment

from ..numerics.errors import ConvergenceError, InvalidInputError
from ..numerics.polynomial import discriminant_in_E, discriminant_value
from ..numerics.precision import PrecisionCtx, Scalar, to_scalar
from ..numerics.roots import newton_1d
from .matrix import ModelParams, Parity, ParityBasis
from .secular import SYMBOLIC_MAX_SIZE, secular_polynomial

logger = logging.getLogger(__name__)

DEFAULT_GRID = (61, 61)
MAX_CANDIDATES = 40


@dataclass
class ExceptionalPoint:
    """
    A solution of F = 0, ∂F/∂E = 0 in complex (λ, E).

    Attributes:
        sector: Parity sector of the coalescing levels.
        branch_label: Global indices of the two levels that meet, if tracked.
        lam: Complex coupling.
        energy: Complex double-root energy.
        residuals: Scaled residuals of the two equations.
        source_D: Hankel or RR dimension that produced the point.
        converged_digits: Digits shared with the previous rung of a ladder.
    """

    sector: Parity
    branch_label: Optional[Tuple[int, int]]
    lam: Scalar
    energy: Scalar
    residuals: Tuple[mpf, mpf]
    source_D: int
    converged_digits: Optional[int] = None

    @property
    def modulus(self) -> mpf:
        """|λ|, the convergence radius of the perturbation series of the coalescing levels."""
        return abs(self.lam)

    def conjugate(self) -> "ExceptionalPoint":
        return ExceptionalPoint(self.sector, self.branch_label, mp.conj(self.lam),
                                mp.conj(self.energy), self.residuals, self.source_D,
                                self.converged_digits)

    def is_conjugate_of(self, other: "ExceptionalPoint", tol: Any) -> bool:
        return (abs(self.lam - mp.conj(other.lam)) <= tol
                and abs(self.energy - mp.conj(other.energy)) <= tol)


def _box(search_box: Sequence[Any]) -> Optional[Tuple[mpf, mpf, mpf, mpf]]:
    if len(search_box) != 4:
        raise InvalidInputError(f"search box needs re0, re1, im0, im1, got {search_box!r}")
    re0, re1, im0, im1 = (mp.re(to_scalar(v)) for v in search_box)
    if re0 >= re1 or im0 >= im1:
        return None
    return re0, re1, im0, im1


def _in_box(lam: Any, box: Tuple[mpf, mpf, mpf, mpf]) -> bool:
    re0, re1, im0, im1 = box
    return re0 <= mp.re(lam) <= re1 and im0 <= mp.im(lam) <= im1


def double_root_energy(sector: Any, size: int, lam: Any, ctx: PrecisionCtx) -> Scalar:
    """Root of ∂F/∂E at λ that makes |F| smallest."""
    polynomial = secular_polynomial(ParityBasis(Parity.parse(sector), size),
                                    ModelParams(lam), ctx).coeffs_in_E
    candidates = polynomial.derivative().roots(ctx)
    if not candidates:
        raise InvalidInputError("double_root_energy needs D >= 2")
    with ctx.working():
        return min(candidates, key=lambda E: abs(polynomial(E)))


def seed_context(ctx: PrecisionCtx, size: int) -> PrecisionCtx:
    """Discriminant work runs 2D digits above ctx and polishes to 10^-(digits/2)."""
    return PrecisionCtx(digits=ctx.digits + 2 * size, max_newton_iters=ctx.max_newton_iters,
                        tol=mpf(10) ** (-(ctx.digits // 2)), guard_digits=ctx.guard_digits)


def ep_seeds(sector: Any, size: int, search_box: Sequence[Any], ctx: PrecisionCtx,
             grid: Tuple[int, int] = DEFAULT_GRID,
             max_candidates: int = MAX_CANDIDATES) -> List[Tuple[Scalar, Scalar]]:
    """
    Approximate exceptional points of one sector inside a complex-λ rectangle.

    Args:
        sector: 'even' / 'odd' (or a Parity).
        size: RR basis size D (>= 2).
        search_box: (re0, re1, im0, im1).
        ctx: Working precision.
        grid: Number of grid points along (Re λ, Im λ).
        max_candidates: Cap on grid minima passed to Newton polishing.

    Returns:
        (λ, E) pairs sorted by |λ|; empty when the box is empty or holds no
        discriminant root. Roots within 10·tol of each other are merged, with
        tol taken from seed_context(ctx, size).
    """
    parity = Parity.parse(sector)
    if size < 2:
        raise InvalidInputError(f"exceptional points need D >= 2, got {size}")
    box = _box(search_box)
    if box is None:
        return []

    basis = ParityBasis(parity, size)
    ctx = seed_context(ctx, size)
    degree_bound = size * (size - 1)
    with ctx.working():
        radius = max(mpf(1), *(abs(mpc(re, im)) for re in box[:2] for im in box[2:]))

    if size <= SYMBOLIC_MAX_SIZE:
        symbolic = secular_polynomial(basis, None, ctx)
        disc_poly = discriminant_in_E(symbolic.coeffs_in_E, ctx, degree_bound=degree_bound,
                                      radius=radius)
        disc, disc_prime = disc_poly, disc_poly.derivative()
        logger.info("%s sector D=%d: discriminant of degree %d in lambda",
                    parity.value, size, disc_poly.degree)
    else:
        def disc(lam: Any) -> Any:
            coeffs = secular_polynomial(basis, ModelParams(lam), ctx).coeffs_in_E.coeffs
            return discriminant_value(coeffs, ctx)

        def disc_prime(lam: Any) -> Any:
            h = ctx.derivative_step
            return (disc(lam + h) - disc(lam - h)) / (2 * h)

    re_axis = np.linspace(float(box[0]), float(box[1]), grid[0])
    im_axis = np.linspace(float(box[2]), float(box[3]), grid[1])
    landscape = np.empty((grid[0], grid[1]))
    with ctx.working():
        for i, re in enumerate(re_axis):
            for j, im in enumerate(im_axis):
                value = abs(disc(mpc(re, im)))
                landscape[i, j] = float(mp.log10(value)) if value > 0 else -np.inf

    minima = np.argwhere(landscape == minimum_filter(landscape, size=3, mode="nearest"))
    order = sorted(minima.tolist(), key=lambda ij: landscape[ij[0], ij[1]])[:max_candidates]
    logger.debug("ep_seeds: %d grid minima, polishing %d", len(minima), len(order))

    roots: List[Scalar] = []
    merge = 10 * ctx.tol
    for i, j in order:
        start = mpc(re_axis[i], im_axis[j])
        try:
            with ctx.working():
                scale = abs(disc_prime(start))
            result = newton_1d(disc, start, ctx, fprime=disc_prime, scale=scale)
        except ConvergenceError as exc:
            logger.debug("discriminant polish from %s failed: %s", start, exc)
            continue
        root = result.root
        if not _in_box(root, box):
            continue
        if any(abs(root - known) <= merge for known in roots):
            continue
        roots.append(root)

    roots.sort(key=lambda z: abs(z))
    seeds = [(lam, double_root_energy(parity, size, lam, ctx)) for lam in roots]
    logger.info("%s sector D=%d: %d exceptional-point seeds in box", parity.value, size, len(seeds))
    return seeds


def label_branches(sector: Any, size: int, lam_ep: Any, energy_ep: Any, ctx: PrecisionCtx,
                   steps: int = 64) -> Tuple[int, int]:
    """
    Global indices of the two levels that coalesce at an exceptional point.

    The secular roots are followed along λ = t·λ_ep from the H_0 levels at
    t = 0, matching roots between steps by a minimum-cost assignment; the two
    tracked levels closest to ``energy_ep`` at the end of the path are reported.
    """
    parity = Parity.parse(sector)
    basis = ParityBasis(parity, size)
    with ctx.working():
        lam_ep, energy_ep = to_scalar(lam_ep), to_scalar(energy_ep)
        labels = basis.quantum_numbers
        current = [mpf(n) + mpf(1) / 2 for n in labels]
        for step in range(1, steps + 1):
            t = mpf(step) / steps * (1 - mpf(1) / (4 * steps))
            roots = secular_polynomial(basis, ModelParams(t * lam_ep), ctx).roots(ctx)
            cost = np.array([[float(abs(a - b)) for b in roots] for a in current])
            rows, cols = linear_sum_assignment(cost)
            current = [roots[c] for _, c in sorted(zip(rows, cols))]
        nearest = sorted(range(size), key=lambda i: abs(current[i] - energy_ep))[:2]
    return tuple(sorted(labels[i] for i in nearest))
