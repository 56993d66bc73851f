"""
Command Implementations

The sweep, critical, eps and hft commands of the Gausswell front end. Each
command turns parsed arguments into a list of result records; sweep points
and exceptional-point seeds are fanned out over a process pool and
collected in input order.

Author: Gausswell Project
Project: Gausswell
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from mpmath import mp, mpf

from ..core.engine import Engine, exceptional_task, sweep_task
from ..numerics.errors import GausswellError, InvalidInputError
from ..numerics.precision import to_scalar
from ..rayleigh_ritz.eigen import Method
from ..rayleigh_ritz.matrix import Parity
from ..core.records import ResultRecord
from .writers import read_guides

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class SweepRequest:
    """
    A λ grid and the states and methods to evaluate on it.

    Attributes:
        lambda_min: Lower end of the grid (inclusive).
        lambda_max: Upper end of the grid (inclusive).
        steps: Number of grid points, at least 2.
        states: Global state indices.
        methods: Subset of RR, RPM and PT.
        digits: Working precision.
    """

    lambda_min: Any
    lambda_max: Any
    steps: int
    states: Tuple[int, ...]
    methods: Tuple[str, ...]
    digits: int

    def __post_init__(self) -> None:
        with mp.workdps(self.digits):
            self.lambda_min = to_scalar(self.lambda_min)
            self.lambda_max = to_scalar(self.lambda_max)
        if not self.lambda_min < self.lambda_max:
            raise InvalidInputError("lambda_min must be below lambda_max")
        if self.steps < 2:
            raise InvalidInputError(f"a sweep needs at least 2 steps, got {self.steps}")
        if not self.states or any(n < 0 for n in self.states):
            raise InvalidInputError(f"states must be non-negative indices, got {self.states}")
        self.methods = tuple(Method.parse(m).value for m in self.methods)

    def grid(self) -> List[mpf]:
        """Uniform grid including both endpoints."""
        with mp.workdps(self.digits):
            spacing = (self.lambda_max - self.lambda_min) / (self.steps - 1)
            points = [self.lambda_min + i * spacing for i in range(self.steps - 1)]
            points.append(self.lambda_max)
        return points


def parse_list(text: str, convert: Callable[[str], T] = str) -> Tuple[T, ...]:
    """Split a comma-separated argument."""
    return tuple(convert(item.strip()) for item in text.split(",") if item.strip())


def parse_box(text: str) -> Tuple[str, str, str, str]:
    """'re0,re1,im0,im1' as four decimal strings."""
    parts = parse_list(text)
    if len(parts) != 4:
        raise InvalidInputError(f"box needs four values re0,re1,im0,im1, got {text!r}")
    return parts


def run_pool(task: Callable[[T], R], items: Iterable[T], workers: int) -> List[R]:
    """
    Apply ``task`` to every item, in input order.

    One worker runs in-process; more use separate processes, since mpmath's
    working precision is global to a process.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [task(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, items))


def cmd_sweep(request: SweepRequest, workers: int = 1,
              guides_path: Optional[str] = None) -> Tuple[List[ResultRecord], Dict[str, Any]]:
    """
    One record per (λ, state, method) over the request's grid.

    Args:
        request: Validated sweep request.
        workers: Process-pool width.
        guides_path: Optional JSON-lines file from the eps command whose
                     moduli become ±|λ_EP| guides in the metadata.

    Returns:
        Records in grid order and extra metadata.
    """
    grid = request.grid()
    logger.info("sweep over %d couplings, states %s, methods %s",
                len(grid), request.states, request.methods)
    tasks = [(lam, request.states, request.methods, request.digits) for lam in grid]
    records = [record for point in run_pool(sweep_task, tasks, workers) for record in point]

    extra: Dict[str, Any] = {}
    if guides_path:
        guides = read_guides(guides_path)
        extra["guides"] = [dict(entry, position=sign + entry["modulus"])
                           for entry in guides for sign in ("-", "+")]
        logger.info("%d guide positions from %s", len(extra["guides"]), guides_path)
    return records, extra


def cmd_critical(engine: Engine, n: int, method: str, digits: int,
                 heroic: bool = False) -> List[ResultRecord]:
    """Critical coupling λ_n^c by the requested method, with ladder rungs."""
    if n < 0:
        raise InvalidInputError(f"state index must be non-negative, got {n}")
    if heroic:
        logger.warning("heroic ladder requested; expect a runtime of hours")
    return engine.critical(n, method, digits, heroic=heroic)


def cmd_eps(engine: Engine, sector: str, box: Sequence[str], digits: int,
            workers: int = 1) -> List[ResultRecord]:
    """
    Exceptional points of one parity sector inside a complex-λ box.

    Seeds that fail to refine become failed records; an empty box yields no
    records at all.
    """
    sector = Parity.parse(sector).value
    try:
        seeds = engine.exceptional_seeds(sector, box, digits)
    except InvalidInputError:
        raise
    except GausswellError as exc:
        logger.error("seed search failed: %s", exc)
        return engine.exceptional_records(sector, [exc], digits)
    points = run_pool(exceptional_task, [(sector, seed, digits) for seed in seeds], workers)
    return engine.exceptional_records(sector, points, digits)


def cmd_hft(engine: Engine, n: int, lam: str, digits: int) -> List[ResultRecord]:
    """Hellmann-Feynman residual of state n at λ."""
    if n < 0:
        raise InvalidInputError(f"state index must be non-negative, got {n}")
    return [engine.hft(n, lam, digits)]
