"""
Parity-sector Rayleigh-Ritz matrices.

The Gaussian perturbation is even, so even and odd H_0 eigenstates never
mix. A sector of size D uses quantum numbers 2i + s, i = 0..D-1, with s = 0
for the even and s = 1 for the odd sector.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, List, Tuple

from mpmath import mp, mpc, mpf

from ..numerics.errors import InvalidInputError
from ..numerics.precision import PrecisionCtx, Scalar, to_scalar
from ..oscillator.matrix_elements import gaussian_matrix_element, h0_matrix_element


class Parity(Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def s(self) -> int:
        """Parity symbol: 0 for even, 1 for odd."""
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def of_state(cls, n: int) -> "Parity":
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @classmethod
    def parse(cls, value: Any) -> "Parity":
        if isinstance(value, Parity):
            return value
        if value in (0, 1):
            return cls.EVEN if value == 0 else cls.ODD
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"unknown parity {value!r}; use 'even' or 'odd'") from None


@dataclass(frozen=True)
class ParityBasis:
    """Symmetry sector plus truncation size D."""

    parity: Parity
    size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if not isinstance(self.size, int) or self.size < 1:
            raise InvalidInputError(f"basis size must be a positive integer, got {self.size!r}")

    @classmethod
    def for_state(cls, n: int, size: int) -> "ParityBasis":
        return cls(Parity.of_state(n), size)

    def quantum_number(self, index: int) -> int:
        """Global H_0 quantum number of sector-local basis function ``index``."""
        return 2 * index + self.parity.s

    @property
    def quantum_numbers(self) -> List[int]:
        return [self.quantum_number(i) for i in range(self.size)]

    def local_index(self, n: int) -> int:
        """Position of global state n inside this sector's ordered spectrum."""
        if Parity.of_state(n) is not self.parity:
            raise InvalidInputError(f"state {n} does not belong to the {self.parity.value} sector")
        return n // 2


@dataclass(frozen=True)
class ModelParams:
    """Coupling constant λ of H = H_0 + λV."""

    lam: Scalar

    def __post_init__(self) -> None:
        value = to_scalar(self.lam)
        if not mp.isfinite(value):
            raise InvalidInputError(f"coupling must be finite, got {self.lam!r}")
        object.__setattr__(self, "lam", value)

    @property
    def is_complex(self) -> bool:
        return isinstance(self.lam, mpc) and self.lam.imag != 0


@dataclass
class RRMatrix:
    """D x D Rayleigh-Ritz matrix of one parity sector at one coupling."""

    basis: ParityBasis
    params: ModelParams
    entries: Any  # mp.matrix

    @property
    def size(self) -> int:
        return self.basis.size

    @property
    def lam(self) -> Scalar:
        return self.params.lam

    @property
    def is_complex(self) -> bool:
        return self.params.is_complex

    def is_symmetric(self) -> bool:
        return all(self.entries[i, j] == self.entries[j, i]
                   for i in range(self.size) for j in range(i + 1, self.size))

    def gershgorin_bounds(self) -> Tuple[mpf, mpf]:
        """Interval containing every eigenvalue of a real symmetric matrix."""
        low, high = mp.inf, -mp.inf
        for i in range(self.size):
            radius = mp.fsum(abs(self.entries[i, j]) for j in range(self.size) if j != i)
            centre = mp.re(self.entries[i, i])
            low, high = min(low, centre - radius), max(high, centre + radius)
        return low, high


def assemble(basis: ParityBasis, lam: Any, ctx: PrecisionCtx) -> RRMatrix:
    """
    Build H_D = (⟨p(i)|H_0|p(j)⟩ - λ⟨p(i)|exp(-x²)|p(j)⟩) for one sector.

    The upper triangle is computed and mirrored, so the result is exactly
    symmetric (complex-symmetric for complex λ).
    """
    labels = basis.quantum_numbers
    with ctx.working():
        params = lam if isinstance(lam, ModelParams) else ModelParams(lam)
        coupling = params.lam
        entries = mp.matrix(basis.size, basis.size)
        for i, pi in enumerate(labels):
            for j in range(i, basis.size):
                pj = labels[j]
                value = h0_matrix_element(pi, pj) - coupling * gaussian_matrix_element(pi, pj, ctx)
                entries[i, j] = value
                entries[j, i] = value
    return RRMatrix(basis, params, entries)
