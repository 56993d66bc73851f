"""
Gausswell Engine - Spectral Solver Orchestration

This module provides the main orchestration class for the Gausswell toolkit,
integrating the Rayleigh-Ritz solver, the Riccati-Pade engine and the
perturbation polynomials into the record-producing operations behind each
command-line command.

Key Components:
- Precision policy (per-command defaults, environment override, --digits)
- λ sweeps of the lowest levels by RR, RPM and perturbation theory
- Critical couplings with basis-size and Hankel-dimension ladders
- Exceptional-point search: discriminant seeding followed by RPM refinement
- Hellmann-Feynman consistency checks

Author: Gausswell Project
Version: 1.0
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf

from ..numerics.errors import GausswellError, InvalidInputError
from ..numerics.precision import PrecisionCtx, shared_digits, to_scalar
from ..oscillator.hellmann_feynman import hft_residual
from ..oscillator.perturbation import pt_critical_lambda, pt_energy
from ..rayleigh_ritz.critical import critical_lambda_rr
from ..rayleigh_ritz.eigen import Method, converge_states, state_oracle
from ..rayleigh_ritz.exceptional import ExceptionalPoint, ep_seeds, label_branches
from ..rayleigh_ritz.matrix import Parity
from ..rpm.hankel import HankelSpec
from ..rpm.solver import ladder_critical_lambda, ladder_E, ladder_ep, solve_critical_lambda
from .records import (STATUS_DISAGREE, STATUS_RUNG, ResultRecord, failed_record,
                           make_record)

logger = logging.getLogger(__name__)


def _load_config():
    import os
    import sys
    sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(__file__))))
    import config
    return config


class Engine:
    """
    Main orchestration class for the spectral toolkit.

    This class turns command requests into result records, catching library
    errors per point or per seed so that one failure never aborts a run.
    """

    def __init__(self, rr_config: Optional[Dict[str, Any]] = None,
                 rpm_config: Optional[Dict[str, Any]] = None,
                 ep_config: Optional[Dict[str, Any]] = None,
                 precision_config: Optional[Dict[str, Any]] = None,
                 heroic_config: Optional[Dict[str, Any]] = None):
        """
        Initialize the engine with solver settings.

        Args:
            rr_config: Rayleigh-Ritz settings (default: config.RR_CONFIG)
            rpm_config: Riccati-Pade settings (default: config.RPM_CONFIG)
            ep_config: Exceptional-point settings (default: config.EP_CONFIG)
            precision_config: Precision settings (default: config.PRECISION_CONFIG)
            heroic_config: Long-run critical-coupling settings (default: config.HEROIC_CONFIG)
        """
        config = _load_config()
        self.rr_config = dict(config.RR_CONFIG, **(rr_config or {}))
        self.rpm_config = dict(config.RPM_CONFIG, **(rpm_config or {}))
        self.ep_config = dict(config.EP_CONFIG, **(ep_config or {}))
        self.precision_config = dict(config.PRECISION_CONFIG, **(precision_config or {}))
        self.heroic_config = dict(config.HEROIC_CONFIG, **(heroic_config or {}))

    def context(self, digits: int) -> PrecisionCtx:
        """Precision context for a run at ``digits`` decimal digits."""
        return PrecisionCtx(digits=digits,
                            max_newton_iters=self.precision_config['max_newton_iters'],
                            guard_digits=self.precision_config['guard_digits'])

    # ------------------------------------------------------------------ sweep

    def sweep_point(self, lam: Any, states: Sequence[int], methods: Sequence[str],
                    digits: int) -> List[ResultRecord]:
        """
        Energies of ``states`` at one coupling by each requested method.

        RR energies are converged over the configured basis schedule; RPM
        energies are seeded from RR (or from n + 1/2) and laddered over D;
        PT exists for n = 0 and 1 only and is skipped otherwise.

        Returns:
            One record per (state, method), in state-then-method order.
        """
        ctx = self.context(digits)
        wanted = [Method.parse(m) for m in methods]
        target = min(self.rr_config['target_digits'], digits - 5)
        with ctx.working():
            lam = to_scalar(lam)
        records: Dict[Tuple[int, Method], ResultRecord] = {}

        rr_points = {}
        if Method.RR in wanted or Method.RPM in wanted:
            try:
                rr_points = converge_states(states, lam, target, ctx, self.rr_config['schedule'])
            except GausswellError as exc:
                logger.warning("RR failed at lambda=%s: %s", mp.nstr(lam, 10), exc)
                if Method.RR in wanted:
                    for n in states:
                        records[(n, Method.RR)] = failed_record("sweep_point", "RR", exc,
                                                                state=n, lam=lam, digits=digits)
            else:
                if Method.RR in wanted:
                    for n in states:
                        point = rr_points[n]
                        records[(n, Method.RR)] = make_record(
                            "sweep_point", "RR", state=n, sector=Parity.of_state(n).value, lam=lam,
                            energy=point.energy, basis_size=point.basis_size, digits=digits,
                            converged_digits=point.converged_digits)

        if Method.RPM in wanted:
            for n in states:
                seed = rr_points[n].energy if n in rr_points else mpf(n) + mpf(1) / 2
                try:
                    ladder = ladder_E(n % 2, lam, seed, ctx, self.rpm_config['ladder'],
                                      d=self.rpm_config['displacement'], target_digits=target)
                    records[(n, Method.RPM)] = make_record(
                        "sweep_point", "RPM", state=n, sector=Parity.of_state(n).value, lam=lam,
                        energy=ladder.value, basis_size=ladder.size, digits=digits,
                        converged_digits=ladder.converged_digits)
                except GausswellError as exc:
                    logger.warning("RPM failed for n=%d at lambda=%s: %s", n, mp.nstr(lam, 10), exc)
                    records[(n, Method.RPM)] = failed_record("sweep_point", "RPM", exc, state=n,
                                                             lam=lam, digits=digits)

        if Method.PT in wanted:
            for n in states:
                if n > 1:
                    logger.info("perturbation polynomials cover n = 0, 1 only; skipping n=%d", n)
                    continue
                records[(n, Method.PT)] = make_record(
                    "sweep_point", "PT", state=n, sector=Parity.of_state(n).value, lam=lam,
                    energy=pt_energy(n, lam, ctx), digits=digits)

        return [records[(n, m)] for n in states for m in wanted if (n, m) in records]

    # --------------------------------------------------------------- critical

    def critical(self, n: int, method: str, digits: int,
                 heroic: bool = False) -> List[ResultRecord]:
        """
        Critical coupling λ_n^c by RR, RPM, both, or the PT closed form.

        Ladder rungs are emitted with status 'rung' and the final value with
        status 'ok'. In 'both' mode the two final values must share
        min(digits, agreement cap, converged digits of each ladder) digits;
        otherwise the RPM record is marked 'disagree'.
        """
        method = method.upper()
        if method not in ("RR", "RPM", "BOTH", "PT"):
            raise InvalidInputError(f"unknown critical method {method!r}")
        if heroic:
            digits = max(digits, self.heroic_config['digits'])
        ctx = self.context(digits)
        sector = Parity.of_state(n).value
        records: List[ResultRecord] = []

        if method == "PT":
            try:
                value = pt_critical_lambda(n, ctx)
                records.append(make_record("critical", "PT", state=n, sector=sector, lam=value,
                                           digits=digits))
            except GausswellError as exc:
                records.append(failed_record("critical", "PT", exc, state=n, digits=digits))
            return records

        rr_final: Optional[Tuple[mpf, int, int]] = None
        if method in ("RR", "BOTH"):
            try:
                ladder = critical_lambda_rr(n, self.rr_config['critical_schedule'], ctx)
                converged = shared_digits(ladder[-1][1], ladder[-2][1], digits) if len(ladder) > 1 else 0
                for size, value in ladder[:-1]:
                    records.append(make_record("critical", "RR", state=n, sector=sector, lam=value,
                                               basis_size=size, digits=digits, status=STATUS_RUNG))
                size, value = ladder[-1]
                records.append(make_record("critical", "RR", state=n, sector=sector, lam=value,
                                           basis_size=size, digits=digits,
                                           converged_digits=converged))
                rr_final = (value, size, converged)
            except GausswellError as exc:
                logger.error("RR critical coupling for n=%d failed: %s", n, exc)
                records.append(failed_record("critical", "RR", exc, state=n, digits=digits))

        if method in ("RPM", "BOTH"):
            try:
                seed = rr_final[0] if rr_final else self._critical_seed(n, ctx)
                sizes = self.heroic_config['ladder'] if heroic else self.rpm_config['critical_ladder']
                target = digits - 10 if heroic else digits // 2
                ladder = ladder_critical_lambda(n % 2, seed, ctx, sizes,
                                                d=self.rpm_config['displacement'],
                                                target_digits=target)
                for size, value in ladder.rungs[:-1]:
                    records.append(make_record("critical", "RPM", state=n, sector=sector, lam=value,
                                               basis_size=size, digits=digits, status=STATUS_RUNG))
                final = make_record("critical", "RPM", state=n, sector=sector, lam=ladder.value,
                                    basis_size=ladder.size, digits=digits,
                                    converged_digits=ladder.converged_digits,
                                    residual_1=self._displacement_gap(n % 2, ladder.size,
                                                                      ladder.value, ctx))
                if method == "BOTH" and rr_final is not None:
                    required = min(digits, self.rpm_config['agreement_cap'], rr_final[2],
                                   ladder.converged_digits)
                    agreement = shared_digits(ladder.value, rr_final[0], digits)
                    if agreement < required:
                        logger.error("RR and RPM agree to %d digits, %d required", agreement, required)
                        final.payload["status"] = STATUS_DISAGREE
                        final.payload["error"] = f"RR/RPM agree to {agreement} digits, need {required}"
                records.append(final)
            except GausswellError as exc:
                logger.error("RPM critical coupling for n=%d failed: %s", n, exc)
                records.append(failed_record("critical", "RPM", exc, state=n, digits=digits))

        return records

    def _displacement_gap(self, s: int, size: int, value: Any, ctx: PrecisionCtx) -> Optional[mpf]:
        """|λ(d) - λ(d')| at the final D, d' being the cross-check displacement."""
        spec = HankelSpec(size, self.rpm_config['cross_check_displacement'])
        try:
            other = solve_critical_lambda(spec, s, value, ctx)
        except GausswellError as exc:
            logger.warning("displacement cross-check at D=%d failed: %s", size, exc)
            return None
        with ctx.working():
            gap = abs(other - value)
        logger.info("displacement cross-check at D=%d: |delta lambda| = %s", size, mp.nstr(gap, 5))
        return gap

    def _critical_seed(self, n: int, ctx: PrecisionCtx) -> mpf:
        if n <= 1:
            return pt_critical_lambda(n, ctx)
        schedule = self.rr_config['critical_schedule']
        return critical_lambda_rr(n, schedule[:1], ctx)[-1][1]

    # ----------------------------------------------------- exceptional points

    def exceptional_seeds(self, sector: str, box: Sequence[Any], digits: int) -> List[Tuple[Any, Any]]:
        """Discriminant seeds (λ, E) of one sector inside a complex-λ box."""
        ctx = self.context(digits)
        return ep_seeds(sector, self.ep_config['seed_basis_size'], box, ctx,
                        grid=tuple(self.ep_config['grid']),
                        max_candidates=self.ep_config['max_candidates'])

    def refine_exceptional_point(self, sector: str, seed: Tuple[Any, Any],
                                 digits: int) -> ExceptionalPoint:
        """RPM ladder from one discriminant seed, with the coalescing levels labelled."""
        ctx = self.context(digits)
        parity = Parity.parse(sector)
        lam_seed, energy_seed = seed
        ladder = ladder_ep(parity.s, (energy_seed, lam_seed), ctx, self.ep_config['ladder'],
                           d=self.rpm_config['displacement'], target_digits=digits // 2)
        point = ladder.value
        point.sector = parity
        point.branch_label = label_branches(parity, self.ep_config['seed_basis_size'], point.lam,
                                            point.energy, ctx, steps=self.ep_config['label_steps'])
        return point

    def exceptional_records(self, sector: str, points: List[Any], digits: int) -> List[ResultRecord]:
        """
        Records for refined points (or the exceptions that replaced them).

        A point whose complex conjugate is also present is reported once, on
        the upper half-plane, with conjugate_pair set.
        """
        with self.context(digits).working():
            tol = mpf(10) ** (-(digits // 3))
        sector = Parity.parse(sector).value
        solved = [p for p in points if isinstance(p, ExceptionalPoint)]
        records: List[ResultRecord] = []
        consumed = set()
        for index, item in enumerate(points):
            if isinstance(item, Exception):
                records.append(failed_record("exceptional", "RPM", item, sector=sector, digits=digits))
                continue
            if index in consumed:
                continue
            pair = False
            for other_index, other in enumerate(points):
                if other_index != index and isinstance(other, ExceptionalPoint) \
                        and other_index not in consumed and item.is_conjugate_of(other, tol):
                    consumed.add(other_index)
                    pair = True
                    break
            point = item if mp.im(item.lam) >= 0 else item.conjugate()
            records.append(make_record(
                "exceptional", "RPM", sector=sector, lam=point.lam, energy=point.energy,
                modulus=point.modulus, basis_size=point.source_D, digits=digits,
                converged_digits=point.converged_digits, residual_1=point.residuals[0],
                residual_2=point.residuals[1], branch=point.branch_label, conjugate_pair=pair))
        logger.info("%d of %d seeds refined in the %s sector", len(solved), len(points), sector)
        return records

    # -------------------------------------------------------- Hellmann-Feynman

    def hft(self, n: int, lam: Any, digits: int) -> ResultRecord:
        """Hellmann-Feynman residual of state n at λ with the configured RR basis."""
        ctx = self.context(digits)
        size = self.rr_config['hft_basis_size']
        oracle = state_oracle(size, ctx)
        try:
            residual = hft_residual(n, lam, self.rr_config['hft_step'], oracle, ctx)
            energy, _, _ = oracle(n, to_scalar(lam))
        except GausswellError as exc:
            return failed_record("hft", "RR", exc, state=n, lam=to_scalar(lam), digits=digits)
        return make_record("hft", "RR", state=n, sector=Parity.of_state(n).value,
                           lam=to_scalar(lam), energy=energy, basis_size=size, digits=digits,
                           residual_1=residual)


def sweep_task(args: Tuple[Any, Sequence[int], Sequence[str], int]) -> List[ResultRecord]:
    """Process-pool entry point for one sweep coupling."""
    lam, states, methods, digits = args
    return Engine().sweep_point(lam, states, methods, digits)


def exceptional_task(args: Tuple[str, Tuple[Any, Any], int]) -> Any:
    """Process-pool entry point for one exceptional-point seed; returns the point or the error."""
    sector, seed, digits = args
    try:
        return Engine().refine_exceptional_point(sector, seed, digits)
    except GausswellError as exc:
        logger.warning("exceptional-point seed %s failed: %s", seed[0], exc)
        return exc
