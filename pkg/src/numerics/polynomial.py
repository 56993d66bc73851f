"""
Dense univariate polynomials over big-floats, and discriminants.

Coefficients are stored in ascending degree. They may themselves be
Polynomial instances, which is how a bivariate F(E, λ) is represented: a
polynomial in E whose coefficients are polynomials in λ.

The discriminant follows the Sylvester-matrix route:

    Disc(F) = (-1)^(n(n-1)/2) * Res(F, dF/dE) / a_n

When the E-coefficients depend on λ, the resultant is sampled on a circle in
the λ-plane and interpolated back with a discrete Fourier transform, which
keeps every determinant numeric.
"""

import logging
from typing import Any, Callable, Iterable, List, Optional, Sequence

from mpmath import mp, mpc, mpf

from .errors import InvalidInputError
from .precision import PrecisionCtx

logger = logging.getLogger(__name__)


def _is_zero(value: Any) -> bool:
    if isinstance(value, Polynomial):
        return value.degree < 0
    return value == 0


class Polynomial:
    """
    Polynomial with ascending coefficients; exact trailing zeros are trimmed.

    The zero polynomial has an empty coefficient list and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Any]):
        values = list(coeffs)
        while values and _is_zero(values[-1]):
            values.pop()
        self.coeffs: List[Any] = values

    @classmethod
    def from_roots(cls, roots: Sequence[Any], leading: Any = 1) -> "Polynomial":
        result = cls([leading])
        for root in roots:
            result = result * cls([-root, 1])
        return result

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Any:
        if not self.coeffs:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Any:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x: Any) -> Any:
        result: Any = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def map(self, fn: Callable[[Any], Any]) -> "Polynomial":
        """Apply ``fn`` to every coefficient (e.g. evaluate λ-coefficients at a point)."""
        return Polynomial(fn(c) for c in self.coeffs)

    def evaluate_coefficients(self, value: Any) -> "Polynomial":
        """Substitute ``value`` into Polynomial-valued coefficients."""
        return self.map(lambda c: c(value) if isinstance(c, Polynomial) else c)

    def derivative(self) -> "Polynomial":
        return Polynomial(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def roots(self, ctx: PrecisionCtx) -> List[Any]:
        """All complex roots via mpmath's Durand-Kerner iteration."""
        if self.degree < 1:
            return []
        with ctx.working():
            return list(mp.polyroots(list(reversed(self.coeffs)), maxsteps=200,
                                     extraprec=4 * (ctx.digits + self.degree), error=False))

    def norm(self) -> Any:
        """Max-abs of numeric coefficients."""
        return max((abs(c) for c in self.coeffs), default=mpf(0))

    def _coerce(self, other: Any) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other: Any) -> "Polynomial":
        other = self._coerce(other)
        size = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coefficient(k) + other.coefficient(k) for k in range(size))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other: Any) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if self.degree < 0 or other.degree < 0:
            return Polynomial([])
        product: List[Any] = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                product[i + j] = product[i + j] + a * b
        return Polynomial(product)

    def __rmul__(self, other: Any) -> "Polynomial":
        return Polynomial(other * c for c in self.coeffs)

    def __repr__(self) -> str:
        terms = ", ".join(mp.nstr(c, 8) if not isinstance(c, Polynomial) else repr(c)
                          for c in self.coeffs)
        return f"Polynomial([{terms}])"


def sylvester_matrix(p: Sequence[Any], q: Sequence[Any]) -> List[List[Any]]:
    """
    Sylvester matrix of two polynomials given by ascending coefficient lists.

    The first deg(q) rows carry shifted copies of p, the remaining deg(p)
    rows shifted copies of q, both in descending order.
    """
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    p_desc, q_desc = list(reversed(p)), list(reversed(q))
    rows: List[List[Any]] = []
    for shift in range(n):
        rows.append([0] * shift + p_desc + [0] * (size - shift - m - 1))
    for shift in range(m):
        rows.append([0] * shift + q_desc + [0] * (size - shift - n - 1))
    return rows


def discriminant_value(coeffs: Sequence[Any], ctx: PrecisionCtx) -> Any:
    """
    Discriminant of a numeric polynomial of exact degree len(coeffs) - 1.

    Coefficient lists are taken as given (no trimming), so a sample where the
    leading coefficient happens to vanish is reported instead of silently
    dropping the degree.
    """
    n = len(coeffs) - 1
    if n < 2:
        raise InvalidInputError(f"discriminant needs degree >= 2, got {n}")
    leading = coeffs[-1]
    if leading == 0:
        raise InvalidInputError("leading coefficient vanishes at this sample")
    derivative = [coeffs[k] * k for k in range(1, n + 1)]
    with ctx.working(ctx.guard_digits + 2 * n):
        resultant = mp.det(mp.matrix(sylvester_matrix(coeffs, derivative)))
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * resultant / leading


def circle_nodes(count: int, radius: Any, ctx: PrecisionCtx) -> List[Any]:
    """``count`` equispaced points on |z| = radius, starting on the positive real axis."""
    with ctx.working():
        radius = mpf(radius)
        return [radius * mp.expjpi(mpf(2 * k) / count) for k in range(count)]


def interpolate_on_circle(sample: Callable[[Any], Any], degree: int, radius: Any,
                          ctx: PrecisionCtx, real: bool = False) -> Polynomial:
    """
    Recover a polynomial of degree <= ``degree`` from samples on |z| = radius.

    Args:
        sample: Function evaluating the polynomial at a complex point.
        degree: Degree bound.
        radius: Circle radius; choose it near the region of interest so the
                scaled coefficients stay comparable in size.
        ctx: Working precision.
        real: Keep only real parts of the coefficients.

    Returns:
        Polynomial with coefficients trimmed where they fall below the
        interpolation noise floor.
    """
    nodes = circle_nodes(degree + 1, radius, ctx)
    with ctx.working():
        values = [sample(z) for z in nodes]
    return interpolate_values(values, radius, ctx, real=real)


def interpolate_values(values: Sequence[Any], radius: Any, ctx: PrecisionCtx,
                       real: bool = False) -> Polynomial:
    """Inverse DFT of samples taken at ``circle_nodes(len(values), radius)``."""
    count = len(values)
    with ctx.working():
        radius = mpf(radius)
        scaled: List[Any] = []
        for j in range(count):
            total = mp.fsum(values[k] * mp.expjpi(-mpf(2 * j * k) / count) for k in range(count))
            scaled.append(total / count)
        noise = max((abs(c) for c in scaled), default=mpf(0)) * ctx.epsilon
        coeffs = []
        for j, c in enumerate(scaled):
            c = c.real if real else c
            coeffs.append(mpf(0) if abs(c) <= noise else c / radius ** j)
    return Polynomial(coeffs)


def discriminant_in_E(F: Polynomial, ctx: PrecisionCtx, degree_bound: Optional[int] = None,
                      radius: Any = 1) -> Polynomial:
    """
    Discriminant of F with respect to E, as a polynomial in λ.

    Args:
        F: Polynomial in E; coefficients are numbers or Polynomials in λ.
        ctx: Working precision.
        degree_bound: Known bound on the λ-degree of the result. Defaults to
                      (2n - 1) times the largest λ-degree among the coefficients.
        radius: Radius of the λ-circle the resultant is sampled on.

    Returns:
        Polynomial in λ (a constant polynomial when F has numeric coefficients).

    Raises:
        InvalidInputError: If F has degree < 2 in E.
    """
    n = F.degree
    if n < 2:
        raise InvalidInputError(f"discriminant_in_E needs degree >= 2 in E, got {n}")

    symbolic = [c for c in F.coeffs if isinstance(c, Polynomial)]
    if not symbolic:
        return Polynomial([discriminant_value(F.coeffs, ctx)])

    lam_degree = max(c.degree for c in symbolic)
    bound = degree_bound if degree_bound is not None else (2 * n - 1) * max(lam_degree, 0)
    is_real = all(not isinstance(x, mpc)
                  for c in F.coeffs
                  for x in (c.coeffs if isinstance(c, Polynomial) else [c]))

    def sample(lam: Any) -> Any:
        coeffs = [c(lam) if isinstance(c, Polynomial) else c for c in F.coeffs]
        return discriminant_value(coeffs, ctx)

    logger.debug("discriminant: E-degree %d, lambda-degree bound %d, radius %s",
                 n, bound, radius)
    return interpolate_on_circle(sample, bound, radius, ctx, real=is_real)
