"""Canonical toric stratification of V(f): strata S^I(K) indexed by coordinate and factor sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groebner import DEFAULT_LIMITS, GREVLEX, Ideal, Limits, ResourceLimitExceeded, dimension, saturate
from .poly import ParametricPolynomial, PolyFamily, Ring


class NotOnVarietyError(ValueError):
    pass


@dataclass
class Stratum:
    """S^I(K); ``dim`` is the dimension inside C x C^n, ``slice_dim`` the dimension of a fixed-t slice."""

    I: frozenset[int]
    K: frozenset[int]
    forced: frozenset[int]
    nonempty: bool | None
    dim: int | None
    certificate: list[str]
    slice_dim: int | None = None
    note: str = ""

    @property
    def inconclusive(self) -> bool:
        return self.nonempty is None

    @property
    def is_t_axis(self) -> bool:
        return not self.I

    def label(self) -> str:
        fmt = lambda s: "{" + ",".join(map(str, sorted(s))) + "}"
        return f"S^{fmt(self.I)}({fmt(self.K)})"

    def sort_key(self):
        return (len(self.I), sorted(self.I), len(self.K), sorted(self.K))


@dataclass
class StratificationReport:
    strata: list[Stratum]
    mode: str  # "generic" or "at"
    t_value: Fraction | None = None

    @property
    def count(self) -> int:
        return len(self.strata)

    @property
    def t_axis(self) -> Stratum | None:
        return next((s for s in self.strata if s.is_t_axis), None)

    @property
    def inconclusive(self) -> list[Stratum]:
        return [s for s in self.strata if s.inconclusive]


def _subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _stratum_ideal(family: PolyFamily, I: frozenset[int], K: frozenset[int], keep_t: bool):
    """Ideal of the stratum and the polynomial to saturate by, in variables z_I (and t)."""
    ring = family.ring
    names = tuple(v for i, v in enumerate(ring.variables) if i + 1 in I)
    params = ring.params if keep_t else ()
    target = Ring(names + params, ())
    restricted = [f.restrict(I) for f in family.factors]
    gens = []
    avoid = ParametricPolynomial.constant(target, 1)
    for v in names:
        avoid = avoid * ParametricPolynomial.symbol(target, v)
    for k, r in enumerate(restricted, start=1):
        if r.is_zero():
            continue
        if r.has_denominator():
            den = ParametricPolynomial(Ring((), ring.params), r.denominator)
            avoid = avoid * den.to_ring(target)
        g = r.cleared().to_ring(target)
        if k in K:
            gens.append(g)
        else:
            avoid = avoid * g
    return Ideal(target, gens), avoid


def _nonempty(ideal: Ideal, avoid: ParametricPolynomial, limits: Limits, modulus: int | None):
    sat = saturate(ideal, avoid, limits, modulus)
    gb = sat.basis(GREVLEX, limits, modulus)
    if gb.is_unit():
        return False, None, ["1"]
    certificate = gb.strings() or ["0"]
    return True, dimension(gb.as_ideal(), limits, modulus), certificate


def enumerate_strata(
    family: PolyFamily,
    t_mode: str | Fraction | int = "generic",
    limits: Limits = DEFAULT_LIMITS,
    modulus: int | None = None,
) -> StratificationReport:
    """All non-empty strata S^I(K) with K containing the factors that vanish identically on C^I.

    ``t_mode`` is ``"generic"`` (t is a coordinate of C x C^n) or a rational value
    at which the slice is taken; in the latter case ``dim`` still refers to the
    stratum in C x C^n and ``slice_dim`` to its slice.
    """
    at = None if t_mode == "generic" else Fraction(t_mode)
    sliced = family.specialize(at) if at is not None else None
    n, k0 = family.n, family.k0
    # a t-free family has no t among the ring symbols; its strata are products with the t-line
    t_free = 0 if family.param is not None else 1
    strata = []
    for I in _subsets(range(1, n + 1)):
        I = frozenset(I)
        forced = frozenset(k for k, f in enumerate(family.factors, start=1) if f.restrict(I).is_zero())
        rest = [k for k in range(1, k0 + 1) if k not in forced]
        for extra in _subsets(rest):
            K = forced | frozenset(extra)
            if not K:
                continue
            try:
                if at is not None:
                    ideal, avoid = _stratum_ideal(sliced, I, K, keep_t=False)
                    ok, slice_dim, cert = _nonempty(ideal, avoid, limits, modulus)
                    if not ok:
                        continue
                    ideal, avoid = _stratum_ideal(family, I, K, keep_t=True)
                    _, dim, _ = _nonempty(ideal, avoid, limits, modulus)
                    strata.append(Stratum(I, K, forced, True, dim + t_free, cert, slice_dim))
                else:
                    ideal, avoid = _stratum_ideal(family, I, K, keep_t=True)
                    ok, dim, cert = _nonempty(ideal, avoid, limits, modulus)
                    if ok:
                        strata.append(Stratum(I, K, forced, True, dim + t_free, cert))
            except ResourceLimitExceeded as exc:
                strata.append(Stratum(I, K, forced, None, None, [], note=str(exc)))
    strata.sort(key=lambda s: s.sort_key())
    return StratificationReport(strata, "generic" if at is None else "at", at)


def classify_point(family: PolyFamily, t, z: Sequence, modulus: int | None = None) -> tuple[frozenset[int], frozenset[int]]:
    """(I, K) of a point (t, z) on V(f), computed exactly (or modulo a prime)."""
    ring = family.ring
    if len(z) != family.n:
        raise ValueError(f"expected {family.n} coordinates, got {len(z)}")
    point = {v: z[i] for i, v in enumerate(ring.variables)}
    for p in ring.params:
        point[p] = t
    if modulus is None:
        point = {k: Fraction(v) for k, v in point.items()}
        values = [f.evaluate(point) for f in family.factors]
        I = frozenset(i + 1 for i, c in enumerate(z) if Fraction(c) != 0)
    else:
        values = [f.evaluate_mod(point, modulus) for f in family.factors]
        I = frozenset(i + 1 for i, c in enumerate(z) if c % modulus)
    K = frozenset(k for k, v in enumerate(values, start=1) if v == 0)
    if not K:
        raise NotOnVarietyError("point is not on V(f)")
    return I, K
