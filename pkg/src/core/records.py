"""
Result records produced by the engine and written by the front end.

Every record flattens to the fixed column schema below. Numbers are written
as decimal strings at the run's working precision with ``mpmath.nstr`` and
re-parse with ``mpmath.mpf`` at that precision; cells that do not apply to a
record kind stay empty.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from mpmath import mp

COLUMNS = [
    "kind", "method", "state", "sector", "lambda_re", "lambda_im", "energy_re", "energy_im",
    "modulus", "basis_size", "digits", "converged_digits", "residual_1", "residual_2",
    "branch", "conjugate_pair", "status", "error",
]

KINDS = ("sweep_point", "critical", "exceptional", "hft")

STATUS_OK = "ok"
STATUS_RUNG = "rung"
STATUS_FAILED = "failed"
STATUS_DISAGREE = "disagree"
FAILED_STATUSES = (STATUS_FAILED, STATUS_DISAGREE)


@dataclass
class ResultRecord:
    """One output row: a kind plus a payload keyed by column names."""

    kind: str
    payload: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")
        unknown = set(self.payload) - set(COLUMNS)
        if unknown:
            raise ValueError(f"unknown record fields {sorted(unknown)}")
        self.payload.setdefault("status", STATUS_OK)

    @property
    def failed(self) -> bool:
        return self.payload.get("status") in FAILED_STATUSES

    def to_row(self, digits: int) -> Dict[str, str]:
        """Flatten to strings in COLUMNS order."""
        row = {column: "" for column in COLUMNS}
        row["kind"] = self.kind
        for key, value in self.payload.items():
            row[key] = format_value(value, digits)
        return row


def format_value(value: Any, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, str)):
        return str(value)
    if isinstance(value, tuple):
        return "/".join(format_value(v, digits) for v in value)
    return mp.nstr(value, digits, strip_zeros=False)


def _split(value: Any) -> Tuple[Any, Any]:
    if value is None:
        return None, None
    return mp.re(value), mp.im(value)


def make_record(kind: str, method: str, *, state: Optional[int] = None,
                sector: Optional[str] = None, lam: Any = None, energy: Any = None,
                **fields: Any) -> ResultRecord:
    """Build a record, splitting complex λ and E into real and imaginary columns."""
    payload: Dict[str, Any] = {"method": method}
    if state is not None:
        payload["state"] = state
    if sector is not None:
        payload["sector"] = sector
    if lam is not None:
        payload["lambda_re"], payload["lambda_im"] = _split(lam)
    if energy is not None:
        payload["energy_re"], payload["energy_im"] = _split(energy)
    payload.update({key: value for key, value in fields.items() if value is not None})
    return ResultRecord(kind, payload)


def failed_record(kind: str, method: str, error: Exception, **fields: Any) -> ResultRecord:
    return make_record(kind, method, status=STATUS_FAILED,
                       error=f"{type(error).__name__}: {error}", **fields)


def any_failed(records: List[ResultRecord]) -> bool:
    return any(record.failed for record in records)
