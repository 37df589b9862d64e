"""Newton polyhedra, faces, face functions and common normal-fan cones.

Every geometric decision goes through the exact LP in :mod:`nad.lp`; face
tuples are carried together with an integral weight vector that realizes them,
so correctness of an enumeration can be re-checked from the witnesses alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .lp import feasible, linprog
from .poly import Mono, ParametricPolynomial, PolynomialError


class ZeroPolynomialError(PolynomialError):
    pass


@dataclass(frozen=True)
class WeightVector:
    w: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.w)
        object.__setattr__(self, "w", w)
        if any(x < 0 for x in w) or not any(w):
            raise ValueError(f"weight vector must be non-negative and non-zero: {w}")

    @property
    def I(self) -> frozenset[int]:
        """1-based indices of the zero weights."""
        return frozenset(i + 1 for i, x in enumerate(self.w) if x == 0)

    def pair(self, alpha: Mono) -> int:
        return sum(a * b for a, b in zip(self.w, alpha))

    def is_positive(self) -> bool:
        return all(self.w)

    def __iter__(self):
        return iter(self.w)

    def __len__(self):
        return len(self.w)


def _as_weight(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(tuple(w))


@dataclass(frozen=True)
class Face:
    carrier: frozenset[Mono]
    witness: WeightVector
    d: int
    compact: bool

    def sort_key(self):
        return tuple(sorted(self.carrier))


@dataclass(frozen=True)
class NewtonPolyhedron:
    """conv(support) + R^n_+ as vertices plus facet inequalities <a, x> >= b."""

    vertices: frozenset[Mono]
    facets: tuple[tuple[tuple[int, ...], int], ...]
    support: frozenset[Mono]

    def contains(self, x: Sequence) -> bool:
        return all(sum(a * v for a, v in zip(normal, x)) >= b for normal, b in self.facets)


@dataclass(frozen=True)
class CommonCone:
    subset: tuple[int, ...]
    faces: tuple[Face, ...]
    I: frozenset[int]

    @property
    def witness(self) -> WeightVector:
        return self.faces[0].witness

    def face_tuple(self) -> tuple[frozenset[Mono], ...]:
        return tuple(f.carrier for f in self.faces)

    def sort_key(self):
        return (tuple(sorted(self.I)), tuple(f.sort_key() for f in self.faces))


@dataclass(frozen=True)
class VanishingRecord:
    k: int
    subspaces: frozenset[frozenset[int]] = field(default_factory=frozenset)

    def __contains__(self, I) -> bool:
        return frozenset(I) in self.subspaces


def _require_nonzero(f: ParametricPolynomial):
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no Newton polyhedron")


def support_min(f: ParametricPolynomial, w) -> tuple[int, Face]:
    """d(w; f) and the face of Gamma_+(f) where <w, .> attains it."""
    _require_nonzero(f)
    w = _as_weight(w)
    if len(w) != f.ring.n:
        raise ValueError("weight vector length does not match the variable count")
    vals = {a: w.pair(a) for a in f.support}
    d = min(vals.values())
    carrier = frozenset(a for a, v in vals.items() if v == d)
    return d, Face(carrier, w, d, w.is_positive())


def face_function(f: ParametricPolynomial, w) -> ParametricPolynomial:
    """Sum of the terms of f whose exponents lie on the face selected by w."""
    _, face = support_min(f, w)
    n = f.ring.n
    num = {m: c for m, c in f.numerator.items() if m[:n] in face.carrier}
    if f.has_denominator():
        return ParametricPolynomial(f.ring, num, f.denominator)
    return ParametricPolynomial(f.ring, num)


# ---------------------------------------------------------------------------
# vertices and facets


def _dominates(p: Mono, q: Mono) -> bool:
    """p lies in q + R^n_+ and p != q."""
    return p != q and all(a >= b for a, b in zip(p, q))


def minimal_points(points: Iterable[Mono]) -> list[Mono]:
    """Vertices of conv(points) + R^n_+ (exact LP membership test)."""
    pts = sorted(set(points))
    cands = [p for p in pts if not any(_dominates(p, q) for q in pts)]
    verts = []
    for p in cands:
        others = [q for q in cands if q != p]
        if not others:
            verts.append(p)
            continue
        # p in conv(others) + R^n_+  <=>  lam >= 0, sum lam = 1, sum lam_j q_j <= p
        A_ub = [[q[i] for q in others] for i in range(len(p))]
        A_eq = [[1] * len(others)]
        if feasible(A_ub, list(p), A_eq, [1], n=len(others)) is None:
            verts.append(p)
    return verts


def _nullspace_vector(rows: list[list[Fraction]], n: int) -> list[Fraction] | None:
    """A non-zero vector spanning the kernel when it is one-dimensional, else None."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][c]
        M[r] = [v / pv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    fc = free[0]
    vec = [Fraction(0)] * n
    vec[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -M[i][fc]
    return vec


def _primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(v).denominator for v in vec), 1)
    ints = [int(Fraction(v) * lcm) for v in vec]
    g = reduce(math.gcd, (abs(v) for v in ints), 0) or 1
    return tuple(v // g for v in ints)


def _facets(vertices: list[Mono], n: int) -> list[tuple[tuple[int, ...], int]]:
    found = set()
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    for k in range(1, min(n, len(vertices)) + 1):
        for pts in itertools.combinations(vertices, k):
            base = pts[0]
            dirs = [[Fraction(a - b) for a, b in zip(p, base)] for p in pts[1:]]
            for rs in itertools.combinations(rays, n - k):
                rows = dirs + [[Fraction(x) for x in r] for r in rs]
                normal = _nullspace_vector(rows, n) if rows else ([Fraction(1)] if n == 1 else None)
                if normal is None:
                    continue
                if all(v <= 0 for v in normal):
                    normal = [-v for v in normal]
                if any(v < 0 for v in normal):
                    continue
                a = _primitive(normal)
                b = sum(x * y for x, y in zip(a, base))
                if all(sum(x * y for x, y in zip(a, v)) >= b for v in vertices):
                    found.add((a, b))
    return sorted(found)


def newton_polyhedron(f: ParametricPolynomial) -> NewtonPolyhedron:
    _require_nonzero(f)
    supp = f.support
    verts = minimal_points(supp)
    return NewtonPolyhedron(frozenset(verts), tuple(_facets(verts, f.ring.n)), supp)


# ---------------------------------------------------------------------------
# common cones


def _closure(
    point_sets: list[list[tuple[int, ...]]],
    chosen: list[frozenset[tuple[int, ...]]],
    m: int,
) -> tuple[list[frozenset], list[Fraction]] | None:
    """Smallest tuple of compact faces containing ``chosen`` plus an interior weight.

    ``point_sets`` are the vertex lists of each polyhedron in R^m.  Variables:
    w' (w = 1 + w'), lambda_k = lp - lm per polyhedron, slack s_v <= 1 for each
    point outside ``chosen``.  Maximising the total slack pushes every point that
    can be separated to slack 1 and leaves exactly the minimal face at 0.
    """
    slack_index = []
    for k, pts in enumerate(point_sets):
        for v in pts:
            if v not in chosen[k]:
                slack_index.append((k, v))
    p = len(point_sets)
    nv = m + 2 * p + len(slack_index)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for k, pts in enumerate(point_sets):
        for v in chosen[k]:
            row = [0] * nv
            row[:m] = v
            row[m + 2 * k] = -1
            row[m + 2 * k + 1] = 1
            A_eq.append(row)
            b_eq.append(-sum(v))
    for s, (k, v) in enumerate(slack_index):
        # <w', v> - lambda_k - s_v >= -sum(v)
        row = [0] * nv
        row[:m] = [-x for x in v]
        row[m + 2 * k] = 1
        row[m + 2 * k + 1] = -1
        row[m + 2 * p + s] = 1
        A_ub.append(row)
        b_ub.append(sum(v))
        cap = [0] * nv
        cap[m + 2 * p + s] = 1
        A_ub.append(cap)
        b_ub.append(1)
    c = [0] * nv
    for s in range(len(slack_index)):
        c[m + 2 * p + s] = -1
    res = linprog(c, A_ub, b_ub, A_eq, b_eq)
    if res.status != "optimal":
        return None
    x = res.x
    closed = [set(ch) for ch in chosen]
    for s, (k, v) in enumerate(slack_index):
        if x[m + 2 * p + s] == 0:
            closed[k].add(v)
    w = [1 + x[j] for j in range(m)]
    return [frozenset(c) for c in closed], w


def _compact_face_tuples(point_sets: list[list[tuple[int, ...]]], m: int):
    """All tuples of compact faces sharing a positive normal, each with a witness in R^m_{>0}."""
    if m == 0:
        return []
    # seeds: vertex tuples with a common open normal cone, built factor by factor
    partial = [((), ())]
    for k in range(len(point_sets)):
        nxt = []
        for chosen, _ in partial:
            for v in point_sets[k]:
                cand = list(chosen) + [frozenset([v])]
                got = _closure(point_sets[: k + 1], cand, m)
                if got is not None and got[0] == cand:
                    nxt.append((tuple(cand), got[1]))
        partial = nxt
    seen = {}
    queue = []
    for chosen, w in partial:
        if chosen not in seen:
            seen[chosen] = w
            queue.append(chosen)
    while queue:
        cur = queue.pop()
        for k, pts in enumerate(point_sets):
            for v in pts:
                if v in cur[k]:
                    continue
                cand = list(cur)
                cand[k] = cand[k] | {v}
                got = _closure(point_sets, cand, m)
                if got is None:
                    continue
                key = tuple(got[0])
                if key not in seen:
                    seen[key] = got[1]
                    queue.append(key)
    return list(seen.items())


def common_cones(factors: Sequence[ParametricPolynomial], I: Iterable[int], subset: Sequence[int] | None = None) -> list[CommonCone]:
    """Face tuples of the given factors over all weight vectors w with I(w) = I.

    Weights vanish exactly on I; the face of each factor only depends on the
    projection of its support to the remaining coordinates, so the problem
    reduces to compact faces of the projected supports.
    """
    I = frozenset(I)
    if not factors:
        return []
    n = factors[0].ring.n
    for f in factors:
        _require_nonzero(f)
    J = [j for j in range(n) if j + 1 not in I]
    if not J:
        return []
    proj_sets = []
    for f in factors:
        proj = {tuple(a[j] for j in J) for a in f.support}
        proj_sets.append(sorted(minimal_points(proj)))
    subset = tuple(subset) if subset is not None else tuple(range(1, len(factors) + 1))
    cones = []
    for _, wJ in _compact_face_tuples(proj_sets, len(J)):
        full = [Fraction(0)] * n
        for j, val in zip(J, wJ):
            full[j] = val
        wv = WeightVector(_primitive(full))
        faces = tuple(support_min(f, wv)[1] for f in factors)
        cones.append(CommonCone(subset, faces, I))
    cones.sort(key=CommonCone.sort_key)
    return cones


def newton_boundary(f: ParametricPolynomial) -> list[Face]:
    """All compact faces of Gamma_+(f), each with a strictly positive witness."""
    return [c.faces[0] for c in common_cones([f], ())]


def vanishing_subspaces(f: ParametricPolynomial, k: int = 1) -> VanishingRecord:
    n = f.ring.n
    out = set()
    for r in range(n + 1):
        for I in itertools.combinations(range(1, n + 1), r):
            if f.restrict(I).is_zero():
                out.add(frozenset(I))
    return VanishingRecord(k, frozenset(out))


def format_weight(w: WeightVector) -> str:
    return "(" + ",".join(str(x) for x in w.w) + ")"
