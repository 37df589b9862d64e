"""Buchberger's algorithm over Q (fraction-free, content removed) or a prime field.

Parameters of a ring are treated as ordinary ring variables here; callers
that need statements over Q(params) saturate by denominators themselves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .poly import Mono, ParametricPolynomial, Ring


class ResourceLimitExceeded(RuntimeError):
    """Raised when a computation exceeds the configured basis size or degree."""


@dataclass(frozen=True)
class Limits:
    max_basis: int = 2000
    max_degree: int = 60


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class TermOrder:
    """grevlex, lex, or a block order (grevlex inside each block, blocks compared left to right).

    ``blocks`` lists symbol names; symbols of the ring not mentioned are put in
    a final block in ring order.
    """

    kind: str = "grevlex"
    blocks: tuple[tuple[str, ...], ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))

    @classmethod
    def block(cls, *blocks: Iterable[str]) -> "TermOrder":
        return cls("block", tuple(tuple(b) for b in blocks))

    def key_function(self, symbols: Sequence[str]):
        """Key where a smaller value means a larger monomial."""
        if self.kind == "lex":
            return lambda m: tuple(-e for e in m)
        if self.kind == "grevlex":
            return lambda m: (-sum(m),) + tuple(reversed(m))
        groups = []
        used = set()
        for b in self.blocks:
            idx = [symbols.index(s) for s in b if s in symbols]
            used.update(idx)
            if idx:
                groups.append(idx)
        rest = [i for i in range(len(symbols)) if i not in used]
        if rest:
            groups.append(rest)

        def key(m):
            out = []
            for g in groups:
                out.append(-sum(m[i] for i in g))
                out.extend(m[i] for i in reversed(g))
            return tuple(out)

        return key


GREVLEX = TermOrder()


# ---------------------------------------------------------------------------
# coefficient domains


class _QQ:
    """Integer coefficients, primitive polynomials (content divided out)."""

    modulus = None

    @staticmethod
    def from_poly(f: ParametricPolynomial) -> dict[Mono, int]:
        num = f.numerator
        if not num:
            return {}
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in num.values()), 1)
        return {m: int(c * lcm) for m, c in num.items()}

    @staticmethod
    def normalize(f: dict, lead: Mono) -> dict:
        g = reduce(math.gcd, f.values(), 0)
        if f[lead] < 0:
            g = -g
        if g != 1:
            f = {m: c // g for m, c in f.items()}
        return f

    @staticmethod
    def subtract_multiple(f: dict, c_f, g: dict, lc_g, shift: Mono) -> dict:
        """lc_g' * f - c_f' * x^shift * g with the common gcd removed."""
        d = math.gcd(c_f, lc_g)
        a, b = lc_g // d, c_f // d
        out = {m: a * c for m, c in f.items()} if a != 1 else dict(f)
        for m, c in g.items():
            mm = tuple(x + y for x, y in zip(m, shift))
            v = out.get(mm, 0) - b * c
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out

    @staticmethod
    def to_fraction(f: dict, lead: Mono) -> dict[Mono, Fraction]:
        lc = f[lead]
        return {m: Fraction(c, lc) for m, c in f.items()}


class _GF:
    def __init__(self, p: int):
        self.modulus = p

    def from_poly(self, f: ParametricPolynomial) -> dict[Mono, int]:
        p = self.modulus
        out = {}
        for m, c in f.numerator.items():
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"coefficient {c} has a denominator divisible by {p}")
            v = c.numerator * pow(c.denominator, -1, p) % p
            if v:
                out[m] = v
        return out

    def normalize(self, f: dict, lead: Mono) -> dict:
        p = self.modulus
        inv = pow(f[lead], -1, p)
        if inv == 1:
            return f
        return {m: c * inv % p for m, c in f.items()}

    def subtract_multiple(self, f: dict, c_f, g: dict, lc_g, shift: Mono) -> dict:
        p = self.modulus
        b = c_f * pow(lc_g, -1, p) % p
        out = dict(f)
        for m, c in g.items():
            mm = tuple(x + y for x, y in zip(m, shift))
            v = (out.get(mm, 0) - b * c) % p
            if v:
                out[mm] = v
            else:
                out.pop(mm, None)
        return out

    def to_fraction(self, f: dict, lead: Mono) -> dict[Mono, Fraction]:
        g = self.normalize(f, lead)
        return {m: Fraction(c) for m, c in g.items()}


def _domain(modulus: int | None):
    return _QQ() if modulus is None else _GF(modulus)


# ---------------------------------------------------------------------------
# public types


@dataclass
class Ideal:
    ring: Ring
    generators: list[ParametricPolynomial]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if g.ring != self.ring:
                g = g.to_ring(self.ring)
            if not g.is_zero():
                gens.append(g.cleared() if g.has_denominator() else g)
        self.generators = gens

    def basis(self, order: TermOrder = GREVLEX, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> "GroebnerBasis":
        key = (order, modulus)
        if key not in self._cache:
            self._cache[key] = buchberger(self, order, limits, modulus)
        return self._cache[key]

    def is_zero(self) -> bool:
        return not self.generators

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass
class GroebnerBasis:
    ring: Ring
    order: TermOrder
    elements: list[ParametricPolynomial]
    modulus: int | None = None
    reduced: bool = True

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].total_degree() == 0 and not self.elements[0].symbols_used()

    def leading_monomials(self) -> list[Mono]:
        key = self.order.key_function(self.ring.symbols)
        return [min(e.numerator, key=key) for e in self.elements]

    def as_ideal(self) -> Ideal:
        ideal = Ideal(self.ring, list(self.elements))
        ideal._cache[(self.order, self.modulus)] = self
        return ideal

    def strings(self) -> list[str]:
        return [str(e) for e in self.elements]


def _lead(f: dict, key) -> Mono:
    return min(f, key=key)


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce_full(f: dict, G: list[tuple[Mono, dict]], dom, key) -> dict:
    """Normal form of f modulo G (every term reduced)."""
    f = dict(f)
    done: dict = {}
    while f:
        m = _lead(f, key)
        c = f[m]
        for lm, g in G:
            if _divides(lm, m):
                shift = tuple(x - y for x, y in zip(m, lm))
                if dom.modulus is None:
                    d = math.gcd(c, g[lm])
                    a = g[lm] // d
                    if a != 1:
                        done = {k: a * v for k, v in done.items()}
                f = dom.subtract_multiple(f, c, g, g[lm], shift)
                break
        else:
            done[m] = c
            del f[m]
    if done and dom.modulus is None:
        g = reduce(math.gcd, done.values(), 0)
        if g > 1:
            done = {k: v // g for k, v in done.items()}
    return done


def _spoly(f: dict, g: dict, lf: Mono, lg: Mono, dom) -> dict:
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    sf = tuple(a - b for a, b in zip(lcm, lf))
    sg = tuple(a - b for a, b in zip(lcm, lg))
    fs = {tuple(x + y for x, y in zip(m, sf)): c for m, c in f.items()}
    return dom.subtract_multiple(fs, f[lf], g, g[lg], sg)


def buchberger(ideal: Ideal, order: TermOrder = GREVLEX, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis with the normal selection strategy and Buchberger's criteria."""
    dom = _domain(modulus)
    ring = ideal.ring
    key = order.key_function(ring.symbols)
    polys = [dom.from_poly(g) for g in ideal.generators]
    polys = [p for p in polys if p]
    G: list[tuple[Mono, dict]] = []
    pairs: set[tuple[int, int]] = set()

    def add(h: dict):
        lm = _lead(h, key)
        h = dom.normalize(h, lm)
        if max(sum(m) for m in h) > limits.max_degree:
            raise ResourceLimitExceeded(f"degree cap {limits.max_degree} exceeded")
        G.append((lm, h))
        if len(G) > limits.max_basis:
            raise ResourceLimitExceeded(f"basis size cap {limits.max_basis} exceeded")
        j = len(G) - 1
        for i in range(j):
            if G[i] is not None:
                pairs.add((i, j))

    for p in polys:
        live = [g for g in G if g is not None]
        h = _reduce_full(p, live, dom, key)
        if h:
            add(h)

    def lcm_of(pair):
        a, b = G[pair[0]][0], G[pair[1]][0]
        return tuple(max(x, y) for x, y in zip(a, b))

    while pairs:
        pair = min(pairs, key=lambda pr: (key(lcm_of(pr)), pr))
        pairs.remove(pair)
        i, j = pair
        li, lj = G[i][0], G[j][0]
        if all(not (a and b) for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        lcm = lcm_of(pair)
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if _divides(G[k][0], lcm):
                if (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs:
                    chain = True
                    break
        if chain:
            continue
        s = _spoly(G[i][1], G[j][1], li, lj, dom)
        h = _reduce_full(s, G, dom, key)
        if h:
            add(h)

    # minimalize and interreduce
    lms = [g[0] for g in G]
    keep = []
    for idx, (lm, g) in enumerate(G):
        redundant = False
        for jdx, other in enumerate(lms):
            if jdx == idx:
                continue
            if _divides(other, lm) and (other != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            keep.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(keep):
        others = [x for k, x in enumerate(keep) if k != idx]
        h = _reduce_full(g, others, dom, key)
        reduced.append((lm, dom.normalize(h, lm)))
    reduced.sort(key=lambda x: key(x[0]))
    elements = [ParametricPolynomial(ring, dom.to_fraction(g, lm)) for lm, g in reduced]
    return GroebnerBasis(ring, order, elements, modulus)


# ---------------------------------------------------------------------------
# normal forms and self-certificates


def normal_form(f: ParametricPolynomial, gb: GroebnerBasis) -> ParametricPolynomial:
    """Remainder of f modulo the basis (up to a non-zero scalar over Q)."""
    dom = _domain(gb.modulus)
    key = gb.order.key_function(gb.ring.symbols)
    G = []
    for e in gb.elements:
        d = dom.from_poly(e)
        G.append((_lead(d, key), d))
    r = _reduce_full(dom.from_poly(f.to_ring(gb.ring) if f.ring != gb.ring else f), G, dom, key)
    if gb.modulus is not None:
        return ParametricPolynomial(gb.ring, {m: Fraction(c) for m, c in r.items()})
    return ParametricPolynomial(gb.ring, {m: Fraction(c) for m, c in r.items()})


def reduces_to_zero(f: ParametricPolynomial, gb: GroebnerBasis) -> bool:
    return normal_form(f, gb).is_zero()


def s_polynomial_closure(gb: GroebnerBasis) -> bool:
    """Every S-polynomial of two basis elements reduces to zero modulo the basis."""
    dom = _domain(gb.modulus)
    key = gb.order.key_function(gb.ring.symbols)
    G = []
    for e in gb.elements:
        d = dom.from_poly(e)
        G.append((_lead(d, key), d))
    for (li, fi), (lj, fj) in itertools.combinations(G, 2):
        if _reduce_full(_spoly(fi, fj, li, lj, dom), G, dom, key):
            return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    key = gb.order.key_function(gb.ring.symbols)
    lms = []
    for e in gb.elements:
        lm = _lead(e.numerator, key)
        if e.numerator[lm] != 1:
            return False
        lms.append(lm)
    for i, e in enumerate(gb.elements):
        for m in e.numerator:
            if any(_divides(lm, m) for j, lm in enumerate(lms) if j != i):
                return False
    return True


# ---------------------------------------------------------------------------
# ideal operations


def is_trivial(ideal: Ideal, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> bool:
    """True iff 1 is in the ideal."""
    if ideal.is_zero():
        return False
    return ideal.basis(GREVLEX, limits, modulus).is_unit()


def _fresh(ring: Ring, base: str) -> str:
    name = base
    while name in ring.symbols:
        name += "_"
    return name


def eliminate(ideal: Ideal, drop: Iterable[str], limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> Ideal:
    """I intersected with the subring generated by the remaining symbols."""
    drop = [s for s in ideal.ring.symbols if s in set(drop)]
    keep_vars = tuple(v for v in ideal.ring.variables if v not in drop)
    keep_params = tuple(p for p in ideal.ring.params if p not in drop)
    sub = Ring(keep_vars, keep_params)
    if ideal.is_zero():
        return Ideal(sub, [])
    order = TermOrder.block(drop, keep_vars + keep_params)
    gb = ideal.basis(order, limits, modulus)
    idx = [ideal.ring.symbols.index(s) for s in drop]
    kept = [e for e in gb.elements if not any(m[i] for m in e.numerator for i in idx)]
    out = Ideal(sub, [e.to_ring(sub) for e in kept])
    # the kept elements form a reduced grevlex-block basis of the elimination ideal
    out._cache[(TermOrder.block(keep_vars + keep_params), modulus)] = GroebnerBasis(
        sub, TermOrder.block(keep_vars + keep_params), list(out.generators), modulus
    )
    return out


def saturate(ideal: Ideal, f: ParametricPolynomial, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> Ideal:
    """(I : f^infinity) via a fresh variable y, the generator 1 - y f, and eliminating y."""
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    ring = ideal.ring
    y = _fresh(ring, "y_sat")
    big = Ring((y,) + ring.variables, ring.params)
    gens = [g.to_ring(big) for g in ideal.generators]
    fb = f.to_ring(big) if not f.has_denominator() else f.cleared().to_ring(big)
    gens.append(ParametricPolynomial.constant(big, 1) - ParametricPolynomial.symbol(big, y) * fb)
    return eliminate(Ideal(big, gens), [y], limits, modulus)


def dimension(ideal: Ideal, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> int:
    """Krull dimension of the quotient by I (all ring symbols count); -1 for the unit ideal."""
    nsym = len(ideal.ring.symbols)
    if ideal.is_zero():
        return nsym
    gb = ideal.basis(GREVLEX, limits, modulus)
    if gb.is_unit():
        return -1
    supports = [frozenset(i for i, e in enumerate(lm) if e) for lm in gb.leading_monomials()]
    for size in range(nsym, -1, -1):
        for S in itertools.combinations(range(nsym), size):
            s = set(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def contains(ideal: Ideal, f: ParametricPolynomial, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> bool:
    return reduces_to_zero(f, ideal.basis(GREVLEX, limits, modulus))


def same_ideal(a: Ideal, b: Ideal, modulus: int | None = None) -> bool:
    ga = a.basis(GREVLEX, modulus=modulus)
    gb = b.basis(GREVLEX, modulus=modulus)
    return [e for e in ga.elements] == [e for e in gb.elements]


def product_ideal(ideals: Sequence[Ideal]) -> Ideal:
    ring = ideals[0].ring
    gens = [ParametricPolynomial.constant(ring, 1)]
    for I in ideals:
        gens = [a * b for a in gens for b in I.generators]
    return Ideal(ring, gens)
