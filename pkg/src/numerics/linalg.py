"""
Determinant kernel shared by the Rayleigh-Ritz and Riccati-Pade solvers.

Big-float (or big-complex) determinants go through mpmath's pivoted LU
elimination. An exact fraction-free (Bareiss) path over rationals exists for
test oracles.
"""

from fractions import Fraction
from typing import Any, List, Sequence

from mpmath import mp

from .errors import InvalidInputError
from .precision import PrecisionCtx


def as_rows(matrix: Any) -> List[List[Any]]:
    """Return a square matrix (nested sequence, numpy array or mp.matrix) as a list of rows."""
    if hasattr(matrix, "rows") and hasattr(matrix, "cols") and not isinstance(matrix, list):
        return [[matrix[i, j] for j in range(matrix.cols)] for i in range(matrix.rows)]
    return [list(row) for row in matrix]


def _check_square(rows: Sequence[Sequence[Any]]) -> int:
    size = len(rows)
    if size == 0:
        raise InvalidInputError("determinant of a 0x0 matrix is undefined here")
    for row in rows:
        if len(row) != size:
            raise InvalidInputError(f"matrix is not square: row of length {len(row)} in {size}x?")
    return size


def det(matrix: Any, ctx: PrecisionCtx, exact: bool = False) -> Any:
    """
    Determinant of a square matrix.

    Args:
        matrix: Square matrix of big-floats, big-complex values, ints or Fractions.
        ctx: Working precision.
        exact: Use fraction-free elimination over rationals. Entries must be
               exactly representable as Fractions (ints, Fractions, decimal strings).

    Returns:
        The determinant (mpf/mpc in the default mode, Fraction in exact mode).

    Raises:
        InvalidInputError: For an empty or non-square matrix.
    """
    rows = as_rows(matrix)
    _check_square(rows)
    if exact:
        return bareiss_det(rows)
    with ctx.working():
        return mp.det(mp.matrix(rows))


def bareiss_det(rows: Sequence[Sequence[Any]]) -> Fraction:
    """Fraction-free Bareiss elimination; exact for rational entries."""
    size = _check_square(rows)
    work = [[Fraction(entry) for entry in row] for row in rows]
    sign = 1
    previous_pivot = Fraction(1)

    for k in range(size - 1):
        if work[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if work[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                work[i][j] = (work[i][j] * pivot - work[i][k] * work[k][j]) / previous_pivot
            work[i][k] = Fraction(0)
        previous_pivot = pivot

    return sign * work[size - 1][size - 1]
