"""
Newton-type root finders at arbitrary precision.

Both solvers damp a step by repeated halving (at most 20 times) when the
full step does not reduce the residual, and judge convergence on the
undamped step together with the residual. Residuals can be divided by
caller-supplied scales so they are expressed in units of the unknowns and
compare directly against ``ctx.tol``. newton_2d gives up early when the
scaled residuals are already below tolerance but the steps stop shrinking:
the scales were fixed at the seed and the iterate is drifting.

newton_1d has a multiplicity-robust mode that iterates on u = f/f'. That
function has simple roots where f has roots of any order, which is what the
Hankel determinants need: at an exact eigenvalue of the unperturbed problem
they vanish to high order.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple, Union

from mpmath import mpf

from .errors import ConvergenceError, SingularDerivativeError, SingularJacobianError
from .precision import PrecisionCtx, Scalar, to_scalar

logger = logging.getLogger(__name__)

MAX_HALVINGS = 20
STALL_LIMIT = 4
STALL_RATIO = mpf("0.9")

Function1D = Callable[[Any], Any]
Function2D = Callable[[Any, Any], Tuple[Any, Any]]


@dataclass
class NewtonResult:
    """Outcome of a 1-D Newton solve."""

    root: Scalar
    iterations: int
    residual: mpf
    step: mpf
    trace: List[Scalar] = field(default_factory=list, repr=False)


@dataclass
class Newton2Result:
    """Outcome of a 2-D Newton solve on (x, y)."""

    x: Scalar
    y: Scalar
    iterations: int
    residuals: Tuple[mpf, mpf]
    step: mpf
    trace: List[Tuple[Scalar, Scalar]] = field(default_factory=list, repr=False)


@dataclass
class _Sample:
    point: Any
    value: Any
    slope: Any
    residual: mpf


def split_evaluation(evaluate: Callable[..., Sequence[Any]], count: int) -> List[Callable[..., Any]]:
    """
    Turn a function returning (f, f', ...) into ``count`` separate callables.

    The most recent evaluation is reused when the callables are invoked at
    the same point, so f and its derivatives cost one evaluation per iterate.
    """
    last: dict = {}

    def component(index: int) -> Callable[..., Any]:
        def call(*point: Any) -> Any:
            if last.get("point") != point:
                last["point"] = point
                last["values"] = evaluate(*point)
            return last["values"][index]
        return call

    return [component(i) for i in range(count)]


def _positive_scale(scale: Any) -> mpf:
    if scale is None:
        return mpf(1)
    value = abs(to_scalar(scale))
    return value if value > 0 else mpf(1)


def newton_1d(f: Function1D, x0: Any, ctx: PrecisionCtx,
              fprime: Optional[Function1D] = None, fsecond: Optional[Function1D] = None,
              *, scale: Any = None, robust: bool = False) -> NewtonResult:
    """
    Find a root of ``f`` near ``x0``.

    Args:
        f: Scalar function, real or complex.
        x0: Starting point.
        ctx: Working precision, tolerance and iteration cap.
        fprime: Analytic derivative; central differences with step
                10^(-digits/2) otherwise.
        fsecond: Analytic second derivative, used in robust mode only.
        scale: Residuals are |f| / scale. Pass |f'(x0)| to measure them in
               units of x.
        robust: Iterate on f/f' (multiplicity-robust; the residual is |f/f'|).

    Returns:
        NewtonResult with the root, iteration count, final residual and step.

    Raises:
        SingularDerivativeError: If the derivative falls below 10^-digits
            (relative to ``scale``).
        ConvergenceError: If max_newton_iters is exhausted; carries the last
            iterate and the trace.
    """
    with ctx.working():
        weight = _positive_scale(scale)
        h = ctx.derivative_step
        floor = ctx.epsilon
        tol = ctx.tol

        def first(x: Any) -> Any:
            if fprime is not None:
                return fprime(x)
            return (f(x + h) - f(x - h)) / (2 * h)

        def second(x: Any, fx: Any) -> Any:
            if fsecond is not None:
                return fsecond(x)
            return (f(x + h) - 2 * fx + f(x - h)) / h ** 2

        def sample(x: Any) -> _Sample:
            fx = f(x)
            if fx == 0:
                return _Sample(x, fx, None, mpf(0))
            slope = first(x)
            if not robust:
                return _Sample(x, fx, slope, abs(fx) / weight)
            if slope == 0:
                raise SingularDerivativeError("derivative vanished in robust Newton",
                                              last_iterate=x)
            ratio = fx / slope
            return _Sample(x, ratio, 1 - fx * second(x, fx) / slope ** 2, abs(ratio))

        x = to_scalar(x0)
        trace: List[Scalar] = [x]
        current = sample(x)
        slope_weight = 1 if robust else weight

        for iteration in range(1, ctx.max_newton_iters + 1):
            if current.value == 0:
                return NewtonResult(current.point, iteration - 1, mpf(0), mpf(0), trace)
            if abs(current.slope) / slope_weight < floor:
                raise SingularDerivativeError(
                    f"derivative below 10^-{ctx.digits} at iteration {iteration}",
                    last_iterate=current.point, iterations=iteration, trace=trace)

            step = current.value / current.slope
            trial = sample(current.point - step)
            if abs(step) > tol:
                fraction = mpf(1)
                for _ in range(MAX_HALVINGS):
                    if trial.residual < current.residual:
                        break
                    fraction /= 2
                    trial = sample(current.point - fraction * step)

            current = trial
            trace.append(current.point)
            logger.debug("newton_1d iter %d: |step|=%.3e residual=%.3e",
                         iteration, float(abs(step)), float(current.residual))
            if abs(step) <= tol and current.residual <= tol:
                return NewtonResult(current.point, iteration, current.residual, abs(step), trace)

        raise ConvergenceError(
            f"newton_1d did not converge in {ctx.max_newton_iters} iterations "
            f"(residual {float(current.residual):.3e})",
            last_iterate=current.point, iterations=ctx.max_newton_iters, trace=trace)


def _as_system(system: Union[Function2D, Sequence[Callable[[Any, Any], Any]]]) -> Function2D:
    if callable(system):
        return system
    first, second = system
    return lambda x, y: (first(x, y), second(x, y))


def newton_2d(system: Union[Function2D, Sequence[Callable[[Any, Any], Any]]],
              seed: Tuple[Any, Any], ctx: PrecisionCtx,
              jacobian: Optional[Callable[[Any, Any], Sequence[Sequence[Any]]]] = None,
              *, scales: Optional[Tuple[Any, Any]] = None) -> Newton2Result:
    """
    Solve a pair of equations g1(x, y) = g2(x, y) = 0.

    Args:
        system: Callable returning (g1, g2), or a pair of callables.
        seed: Starting point (x, y), real or complex.
        ctx: Working precision, tolerance and iteration cap.
        jacobian: Callable returning [[dg1/dx, dg1/dy], [dg2/dx, dg2/dy]];
                  central differences otherwise.
        scales: Per-equation residual scales (e.g. Jacobian row norms at the seed).

    Returns:
        Newton2Result with the solution and both scaled residuals.

    Raises:
        SingularJacobianError: If the Jacobian determinant vanishes relative
            to its terms.
        ConvergenceError: If max_newton_iters is exhausted or the steps stop
            shrinking while the residuals are below tolerance; carries the trace.
    """
    evaluate = _as_system(system)

    with ctx.working():
        h = ctx.derivative_step
        floor = ctx.epsilon
        tol = ctx.tol
        weights = (mpf(1), mpf(1)) if scales is None else tuple(_positive_scale(s) for s in scales)

        def jac(x: Any, y: Any) -> Sequence[Sequence[Any]]:
            if jacobian is not None:
                return jacobian(x, y)
            gx_plus, gx_minus = evaluate(x + h, y), evaluate(x - h, y)
            gy_plus, gy_minus = evaluate(x, y + h), evaluate(x, y - h)
            return [[(gx_plus[i] - gx_minus[i]) / (2 * h), (gy_plus[i] - gy_minus[i]) / (2 * h)]
                    for i in range(2)]

        def sample(x: Any, y: Any) -> Tuple[Tuple[Any, Any], Tuple[mpf, mpf]]:
            g1, g2 = evaluate(x, y)
            return (g1, g2), (abs(g1) / weights[0], abs(g2) / weights[1])

        x, y = to_scalar(seed[0]), to_scalar(seed[1])
        trace: List[Tuple[Scalar, Scalar]] = [(x, y)]
        values, residuals = sample(x, y)
        previous_step: Optional[mpf] = None
        stalled = 0

        for iteration in range(1, ctx.max_newton_iters + 1):
            if values[0] == 0 and values[1] == 0:
                return Newton2Result(x, y, iteration - 1, residuals, mpf(0), trace)

            (a, b), (c, d) = jac(x, y)
            determinant = a * d - b * c
            magnitude = abs(a * d) + abs(b * c)
            if magnitude == 0 or abs(determinant) <= floor * magnitude:
                raise SingularJacobianError(
                    f"singular Jacobian at iteration {iteration}",
                    last_iterate=(x, y), iterations=iteration, trace=trace)

            dx = (d * values[0] - b * values[1]) / determinant
            dy = (a * values[1] - c * values[0]) / determinant
            step = max(abs(dx), abs(dy))

            fraction = mpf(1)
            trial_values, trial_residuals = sample(x - dx, y - dy)
            if step > tol:
                for _ in range(MAX_HALVINGS):
                    if max(trial_residuals) < max(residuals):
                        break
                    fraction /= 2
                    trial_values, trial_residuals = sample(x - fraction * dx, y - fraction * dy)

            x, y = x - fraction * dx, y - fraction * dy
            values, residuals = trial_values, trial_residuals
            trace.append((x, y))
            logger.debug("newton_2d iter %d: |step|=%.3e residuals=(%.3e, %.3e)",
                         iteration, float(step), float(residuals[0]), float(residuals[1]))
            if step <= tol and max(residuals) <= tol:
                return Newton2Result(x, y, iteration, residuals, step, trace)

            if (max(residuals) <= tol and previous_step is not None
                    and step >= STALL_RATIO * previous_step):
                stalled += 1
            else:
                stalled = 0
            if stalled >= STALL_LIMIT:
                raise ConvergenceError(
                    f"newton_2d stalled at iteration {iteration}: residuals below tolerance "
                    f"but |step|={float(step):.3e} is not shrinking",
                    last_iterate=(x, y), iterations=iteration, trace=trace)
            previous_step = step

        raise ConvergenceError(
            f"newton_2d did not converge in {ctx.max_newton_iters} iterations "
            f"(residuals {float(residuals[0]):.3e}, {float(residuals[1]):.3e})",
            last_iterate=(x, y), iterations=ctx.max_newton_iters, trace=trace)
