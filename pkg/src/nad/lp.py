"""Exact rational linear programming: two-phase tableau simplex with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Number = int | Fraction


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = T[r]
    p = row[c]
    if p != 1:
        T[r] = row = [v / p for v in row]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f:
                T[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(T: list[list[Fraction]], basis: list[int], ncols: int) -> str:
    """Minimise the objective stored in the last row; columns >= ncols are never entered."""
    m = len(T) - 1
    while True:
        obj = T[m]
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, best[1], enter)


def solve_standard(c: Sequence[Number], A: Sequence[Sequence[Number]], b: Sequence[Number]) -> LPResult:
    """minimise c.x subject to A x = b, x >= 0, exactly over Q."""
    m, n = len(A), len(c)
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [rhs])
    # phase 1: artificial columns n..n+m-1
    T = []
    for i, row in enumerate(rows):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(row[:n] + art + [row[n]])
    obj = [Fraction(0)] * (n + m + 1)
    for row in T:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    T.append(obj)
    basis = list(range(n, n + m))
    _simplex(T, basis, n + m)
    if T[m][-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is not None:
                _pivot(T, basis, i, col)
    keep = [i for i in range(m) if basis[i] < n]
    T2 = [T[i][:n] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    obj = [Fraction(v) for v in c] + [Fraction(0)]
    for i, bcol in enumerate(basis2):
        f = obj[bcol]
        if f:
            obj = [a - f * r for a, r in zip(obj, T2[i])]
    T2.append(obj)
    status = _simplex(T2, basis2, n)
    if status != "optimal":
        return LPResult(status)
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis2):
        x[bcol] = T2[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)


def linprog(
    c: Sequence[Number],
    A_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    A_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
) -> LPResult:
    """minimise c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0."""
    n = len(c)
    k = len(A_ub)
    A = []
    b = []
    for i, row in enumerate(A_ub):
        slack = [0] * k
        slack[i] = 1
        A.append(list(row) + slack)
        b.append(b_ub[i])
    for i, row in enumerate(A_eq):
        A.append(list(row) + [0] * k)
        b.append(b_eq[i])
    res = solve_standard(list(c) + [0] * k, A, b)
    if res.x is not None:
        res.x = res.x[:n]
    return res


def feasible(A_ub=(), b_ub=(), A_eq=(), b_eq=(), n: int | None = None) -> list[Fraction] | None:
    """A feasible point of the system (x >= 0), or None."""
    if n is None:
        n = len((list(A_ub) or list(A_eq))[0])
    res = linprog([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == "optimal" else None
