"""
Truncated bivariate Taylor arithmetic in (δE, δλ).

A jet of orders (p, q) is a flat coefficient list c[i*(q+1) + j] of the
monomials δE^i δλ^j with i <= p, j <= q. Products drop every monomial
outside that box, which is exact for the retained coefficients. Carrying
jets through the Riccati recursion and a pivoted elimination yields a
determinant together with its partial derivatives in one pass.
"""

from typing import Any, List, Sequence, Tuple

from mpmath import mp

Jet = List[Any]


class JetAlgebra:
    """
    Arithmetic on jets of fixed orders.

    Attributes:
        order_E: Highest power of δE kept.
        order_lambda: Highest power of δλ kept.
    """

    def __init__(self, order_E: int = 2, order_lambda: int = 1):
        self.order_E = order_E
        self.order_lambda = order_lambda
        self.width = order_lambda + 1
        self.size = (order_E + 1) * (order_lambda + 1)

        # terms[k] lists (a_index, b_index) pairs whose product lands on monomial k
        self._terms: List[List[Tuple[int, int]]] = [[] for _ in range(self.size)]
        for ia in range(self.size):
            ea, la = divmod(ia, self.width)
            for ib in range(self.size):
                eb, lb = divmod(ib, self.width)
                if ea + eb <= order_E and la + lb <= order_lambda:
                    self._terms[(ea + eb) * self.width + la + lb].append((ia, ib))

    def index(self, power_E: int, power_lambda: int) -> int:
        return power_E * self.width + power_lambda

    def constant(self, value: Any) -> Jet:
        jet: Jet = [0] * self.size
        jet[0] = value
        return jet

    def variable_E(self, value: Any) -> Jet:
        """Jet of E = value + δE."""
        jet = self.constant(value)
        if self.order_E >= 1:
            jet[self.index(1, 0)] = 1
        return jet

    def variable_lambda(self, value: Any) -> Jet:
        """Jet of λ = value + δλ."""
        jet = self.constant(value)
        if self.order_lambda >= 1:
            jet[self.index(0, 1)] = 1
        return jet

    def add(self, a: Jet, b: Jet) -> Jet:
        return [x + y for x, y in zip(a, b)]

    def sub(self, a: Jet, b: Jet) -> Jet:
        return [x - y for x, y in zip(a, b)]

    def scale(self, a: Jet, factor: Any) -> Jet:
        return [x * factor for x in a]

    def mul(self, a: Jet, b: Jet) -> Jet:
        out: Jet = []
        for pairs in self._terms:
            total: Any = 0
            for ia, ib in pairs:
                total = total + a[ia] * b[ib]
            out.append(total)
        return out

    def div(self, a: Jet, b: Jet) -> Jet:
        """Solve b * c = a for c; requires b[0] != 0."""
        head = b[0]
        out: Jet = [0] * self.size
        for k, pairs in enumerate(self._terms):
            total = a[k]
            for ib, ic in pairs:
                if ib != 0:
                    total = total - b[ib] * out[ic]
            out[k] = total / head
        return out

    def is_zero(self, a: Jet) -> bool:
        return all(x == 0 for x in a)

    def partial(self, a: Jet, power_E: int, power_lambda: int) -> Any:
        """Partial derivative ∂^(i+j)/∂E^i ∂λ^j at the expansion point."""
        return a[self.index(power_E, power_lambda)] * mp.factorial(power_E) * mp.factorial(power_lambda)


def jet_det(algebra: JetAlgebra, matrix: Sequence[Sequence[Jet]]) -> Jet:
    """
    Determinant of a square matrix of jets by pivoted elimination.

    Pivots are chosen by the magnitude of their constant term. If every
    remaining pivot candidate has a zero constant term the constant matrix is
    singular; the determinant's constant term is then zero and the returned
    jet is the zero jet.
    """
    rows = [[list(entry) for entry in row] for row in matrix]
    size = len(rows)
    result = algebra.constant(1)
    sign = 1

    for k in range(size):
        pivot_row = max(range(k, size), key=lambda r: abs(rows[r][k][0]))
        if rows[pivot_row][k][0] == 0:
            return algebra.constant(0)
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pivot = rows[k][k]
        result = algebra.mul(result, pivot)
        for r in range(k + 1, size):
            if algebra.is_zero(rows[r][k]):
                continue
            factor = algebra.div(rows[r][k], pivot)
            for c in range(k + 1, size):
                rows[r][c] = algebra.sub(rows[r][c], algebra.mul(factor, rows[k][c]))

    return result if sign > 0 else algebra.scale(result, -1)
