"""Exact verdicts for Newton non-degeneracy, local tameness and boundary constancy.

Every check reduces to an ideal computation: the face functions of a cone plus
the maximal minors of their Jacobian, saturated by the torus (and by
parameter denominators).  A unit ideal certifies the property for every value
of the parameters; otherwise the bad locus is projected to parameter space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .groebner import (
    DEFAULT_LIMITS,
    GREVLEX,
    Ideal,
    Limits,
    ResourceLimitExceeded,
    eliminate,
    product_ideal,
    saturate,
)
from .poly import Coefficient, ParametricPolynomial, PolyFamily, Ring
from .polyhedra import CommonCone, common_cones, face_function, format_weight, newton_polyhedron, vanishing_subspaces

GLOBAL = "CertifiedGlobal"
GENERIC = "CertifiedGeneric"
DEGENERATE = "Degenerate"
INCONCLUSIVE = "Inconclusive"

TIER_RANK = {GLOBAL: 0, GENERIC: 1, INCONCLUSIVE: 2, DEGENERATE: 3}


@dataclass(frozen=True)
class CertifyTask:
    subset: tuple[int, ...]
    I: frozenset[int] = frozenset()
    with_t: bool = True
    u_params: tuple[str, ...] = ()


@dataclass
class ConeVerdict:
    """Outcome of one cone's check."""

    tier: str
    cone: CommonCone
    task: CertifyTask
    exceptional_locus: Ideal | None = None
    witness: Ideal | None = None
    origin_clear: bool = False
    note: str = ""

    def label(self) -> str:
        I = "{" + ",".join(map(str, sorted(self.task.I))) + "}"
        return f"I={I} w={format_weight(self.cone.witness)}"

    def sort_key(self):
        return (sorted(self.task.I), len(self.task.I), self.cone.sort_key())


@dataclass
class Verdict:
    tier: str
    exceptional_locus: Ideal | None = None
    witness: Ideal | None = None
    log: list[ConeVerdict] = field(default_factory=list)
    origin_clear: bool = True
    probabilistic: bool = False
    note: str = ""

    @property
    def failing(self) -> ConeVerdict | None:
        for entry in self.log:
            if entry.tier in (DEGENERATE, INCONCLUSIVE):
                return entry
        return None


# ---------------------------------------------------------------------------
# helpers


def _fresh_names(taken: Iterable[str], wanted: Sequence[str]) -> tuple[str, ...]:
    taken = set(taken)
    out = []
    for w in wanted:
        name = w
        while name in taken:
            name += "_"
        taken.add(name)
        out.append(name)
    return tuple(out)


def determinant(rows: list[list[ParametricPolynomial]]) -> ParametricPolynomial:
    """Cofactor expansion along the first row (matrices here are at most 6x6)."""
    if len(rows) == 1:
        return rows[0][0]
    total = None
    for j, a in enumerate(rows[0]):
        if a.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = a * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else rows[0][0] * 0


def _freeze(g: ParametricPolynomial, I: frozenset[int], u_names: dict[int, str], target: Ring) -> ParametricPolynomial:
    """Rename z_i (i in I) to the parameter u_i and move g into ``target``."""
    src = g.ring
    renamed = Ring(tuple(u_names.get(i + 1, v) for i, v in enumerate(src.variables)), src.params)
    moved = ParametricPolynomial(renamed, g.numerator, g.denominator if g.has_denominator() else None)
    return moved.to_ring(target)


def _origin_clear(E: Ideal) -> bool:
    origin = {s: Fraction(0) for s in E.ring.symbols}
    return any(g.evaluate(origin) != 0 for g in E.generators)


# ---------------------------------------------------------------------------
# per-cone check


def check_face_nondegenerate(
    factors: Sequence[ParametricPolynomial],
    cone: CommonCone,
    task: CertifyTask,
    limits: Limits = DEFAULT_LIMITS,
    modulus: int | None = None,
) -> ConeVerdict:
    """Non-degeneracy of the cone's face functions on the torus, with z_i (i in I) frozen to parameters u_i."""
    ring = factors[0].ring
    I = frozenset(task.I)
    free = tuple(v for i, v in enumerate(ring.variables) if i + 1 not in I)
    frozen_idx = sorted(I)
    u = task.u_params or _fresh_names(ring.symbols, [f"u{i}" for i in frozen_idx])
    u_names = dict(zip(frozen_idx, u))
    target = Ring(free, tuple(u) + ring.params)
    gs = [face_function(f, cone.witness) for f in factors]
    dens = [g for g in gs if g.has_denominator()]
    gs = [_freeze(g, I, u_names, target).cleared() for g in gs]
    p = len(gs)
    gens = list(gs)
    if p <= len(free):
        jac = [[g.diff(v) for v in free] for g in gs]
        for cols in itertools.combinations(range(len(free)), p):
            d = determinant([[row[c] for c in cols] for row in jac])
            if not d.is_zero():
                gens.append(d)
    torus = ParametricPolynomial.constant(target, 1)
    for name in free + tuple(u):
        torus = torus * ParametricPolynomial.symbol(target, name)
    for g in dens:
        den = ParametricPolynomial(Ring((), ring.params), g.denominator)
        torus = torus * den.to_ring(target)
    try:
        J = Ideal(target, gens)
        J_sat = saturate(J, torus, limits, modulus)
        if J_sat.basis(GREVLEX, limits, modulus).is_unit():
            return ConeVerdict(GLOBAL, cone, task)
        sat_basis = J_sat.basis(GREVLEX, limits, modulus).as_ideal()
        E = eliminate(J_sat, free, limits, modulus)
        if E.is_zero():
            return ConeVerdict(DEGENERATE, cone, task, witness=sat_basis)
        E = E.basis(GREVLEX, limits, modulus).as_ideal()
        return ConeVerdict(GENERIC, cone, task, exceptional_locus=E, witness=sat_basis, origin_clear=_origin_clear(E))
    except ResourceLimitExceeded as exc:
        return ConeVerdict(INCONCLUSIVE, cone, task, note=str(exc))


# ---------------------------------------------------------------------------
# aggregation


def aggregate(entries: Iterable[ConeVerdict], limits: Limits = DEFAULT_LIMITS, probabilistic: bool = False) -> Verdict:
    """Worst tier wins; the log is sorted so the result does not depend on processing order."""
    log = sorted(entries, key=lambda e: e.sort_key())
    if not log:
        return Verdict(GLOBAL, probabilistic=probabilistic, note="no cones to check")
    tier = max((e.tier for e in log), key=TIER_RANK.__getitem__)
    verdict = Verdict(tier, log=log, probabilistic=probabilistic)
    generic = [e for e in log if e.tier == GENERIC]
    verdict.origin_clear = all(e.origin_clear for e in generic)
    if tier == DEGENERATE:
        verdict.witness = next(e.witness for e in log if e.tier == DEGENERATE)
    elif tier == INCONCLUSIVE:
        verdict.note = next(e.note for e in log if e.tier == INCONCLUSIVE)
    if generic:
        params: list[str] = []
        for e in generic:
            for s in e.exceptional_locus.ring.symbols:
                if s not in params:
                    params.append(s)
        ring = Ring((), tuple(sorted(params)))
        loci = [Ideal(ring, [g.to_ring(ring) for g in e.exceptional_locus.generators]) for e in generic]
        try:
            combined = product_ideal(loci) if len(loci) > 1 else loci[0]
            verdict.exceptional_locus = combined.basis(GREVLEX, limits).as_ideal()
        except ResourceLimitExceeded:
            verdict.exceptional_locus = loci[0]
    return verdict


# ---------------------------------------------------------------------------
# family-level checks


def _prepare(family: PolyFamily, subset: Sequence[int], with_t: bool, t_value) -> list[ParametricPolynomial]:
    if not subset:
        raise ValueError("subset must be non-empty")
    fam = family if with_t else family.specialize(t_value)
    return [fam.factors[k - 1] for k in subset]


def check_nondegeneracy(
    family: PolyFamily,
    subset: Sequence[int],
    with_t: bool = True,
    t_value=0,
    limits: Limits = DEFAULT_LIMITS,
    modulus: int | None = None,
) -> Verdict:
    """Compact-face non-degeneracy of the complete intersection given by ``subset`` (1-based factor indices)."""
    subset = tuple(subset)
    factors = _prepare(family, subset, with_t, t_value)
    task = CertifyTask(subset, frozenset(), with_t)
    entries = [check_face_nondegenerate(factors, c, task, limits, modulus) for c in common_cones(factors, (), subset)]
    return aggregate(entries, limits, probabilistic=modulus is not None)


def common_vanishing(factors: Sequence[ParametricPolynomial]) -> list[frozenset[int]]:
    """Non-empty I that are vanishing coordinate subspaces of every factor."""
    sets = [vanishing_subspaces(f).subspaces for f in factors]
    common = frozenset.intersection(*sets)
    return sorted((I for I in common if I), key=lambda I: (len(I), sorted(I)))


def check_local_tameness(
    family: PolyFamily,
    subset: Sequence[int],
    with_t: bool = True,
    t_value=0,
    limits: Limits = DEFAULT_LIMITS,
    modulus: int | None = None,
) -> Verdict:
    """Non-degeneracy with frozen coordinates u_i for every common vanishing subspace I."""
    subset = tuple(subset)
    factors = _prepare(family, subset, with_t, t_value)
    ring = factors[0].ring
    entries = []
    for I in common_vanishing(factors):
        u = _fresh_names(ring.symbols, [f"u{i}" for i in sorted(I)])
        task = CertifyTask(subset, I, with_t, u)
        for cone in common_cones(factors, I, subset):
            entries.append(check_face_nondegenerate(factors, cone, task, limits, modulus))
    verdict = aggregate(entries, limits, probabilistic=modulus is not None)
    if not entries:
        verdict.note = "no common vanishing coordinate subspace"
    return verdict


@dataclass
class BoundaryResult:
    factor: int
    passed: bool
    offending: list[tuple[tuple[int, ...], Coefficient]]
    vertices: list[tuple[int, ...]]


def check_boundary_constancy(f: ParametricPolynomial, t_value=0, factor: int = 1) -> BoundaryResult:
    """Every vertex of the generic Newton polyhedron keeps a finite non-zero coefficient at t = t_value."""
    poly = newton_polyhedron(f)
    terms = f.terms
    vertices = sorted(poly.vertices)
    offending = []
    if f.ring.params:
        at = {p: Fraction(t_value) for p in f.ring.params}
        for v in vertices:
            c = terms[v]
            if not _survives(c, at):
                offending.append((v, c))
    return BoundaryResult(factor, not offending, offending, vertices)


def _survives(c: Coefficient, at: dict) -> bool:
    ring = Ring((), c.params)
    num = ParametricPolynomial(ring, c.num)
    den = ParametricPolynomial(ring, c.den) if c.den else ParametricPolynomial.constant(ring, 1)
    return den.evaluate(at) != 0 and num.evaluate(at) != 0
