"""Exact sparse polynomials in z-variables with coefficients in a parameter field.

A :class:`ParametricPolynomial` lives in a :class:`Ring` made of ordered
variables ``z1..zn`` and ordered parameters (``t`` for user input, plus the
``u_i`` introduced by the certifier).  Internally a polynomial is a single
flat numerator over ``variables + params`` divided by a common denominator in
the parameters only, so every element of Q(params)[z] has a representation.
Coefficients are :class:`fractions.Fraction`; nothing here touches floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

Mono = tuple[int, ...]
Terms = dict[Mono, Fraction]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class PolynomialError(ValueError):
    """Base class for polynomial construction errors."""


class PolynomialSyntaxError(PolynomialError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifierError(PolynomialError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier {name!r} at position {position}")
        self.name = name
        self.position = position


class NegativeExponentError(PolynomialError):
    def __init__(self, position: int):
        super().__init__(f"negative exponent at position {position}")
        self.position = position


class PoleError(PolynomialError):
    """Specialization hits a zero of a coefficient denominator."""


# ---------------------------------------------------------------------------
# flat sparse helpers (dict monomial -> Fraction)


def _clean(terms: Mapping[Mono, Fraction]) -> Terms:
    return {m: c for m, c in terms.items() if c}


def _add(a: Mapping[Mono, Fraction], b: Mapping[Mono, Fraction], sign: int = 1) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + sign * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul(a: Mapping[Mono, Fraction], b: Mapping[Mono, Fraction]) -> Terms:
    out: dict[Mono, Fraction] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return _clean(out)


def _scale(a: Mapping[Mono, Fraction], c) -> Terms:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def _deriv(a: Mapping[Mono, Fraction], i: int) -> Terms:
    out = {}
    for m, c in a.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
    return out


def _grevlex_desc(m: Mono) -> tuple:
    # smaller key == larger monomial
    return (-sum(m),) + tuple(reversed(m))


def _lead(a: Mapping[Mono, Fraction]) -> tuple[Mono, Fraction]:
    m = min(a, key=_grevlex_desc)
    return m, a[m]


def _is_constant(a: Mapping[Mono, Fraction]) -> bool:
    return all(not any(m) for m in a)


def _divide_exact(a: Terms, b: Terms) -> Terms | None:
    """Quotient a/b when b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    mb, cb = _lead(b)
    rem = dict(a)
    quot: Terms = {}
    while rem:
        m, c = _lead(rem)
        if any(x < y for x, y in zip(m, mb)):
            return None
        qm = tuple(x - y for x, y in zip(m, mb))
        qc = c / cb
        quot[qm] = qc
        rem = _add(rem, _mul({qm: qc}, b), -1)
    return quot


def _univariate(a: Terms, i: int) -> dict[int, Fraction]:
    return {m[i]: c for m, c in a.items()}


def _uni_gcd(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    """Monic gcd of two univariate polynomials given as degree -> coefficient."""

    def divmod_(p, q):
        p = dict(p)
        dq = max(q)
        while p and max(p) >= dq:
            dp = max(p)
            c = p[dp] / q[dq]
            for e, v in q.items():
                k = e + dp - dq
                nv = p.get(k, 0) - c * v
                if nv:
                    p[k] = nv
                else:
                    p.pop(k, None)
        return p

    a, b = dict(a), dict(b)
    while b:
        a, b = b, divmod_(a, b)
    if not a:
        return {}
    lc = a[max(a)]
    return {e: v / lc for e, v in a.items()}


def _monomial_gcd(monos: Iterable[Mono]) -> Mono:
    monos = list(monos)
    return tuple(min(col) for col in zip(*monos))


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class FieldTower:
    """Coefficient field Q(params) over which a ring's polynomials live."""

    parameter_names: tuple[str, ...]

    @property
    def level(self) -> str:
        if not self.parameter_names:
            return "Q"
        return "Q(" + ", ".join(self.parameter_names) + ")"


@dataclass(frozen=True)
class Ring:
    variables: tuple[str, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "params", tuple(self.params))
        names = self.variables + self.params
        if len(set(names)) != len(names):
            raise PolynomialError(f"duplicate or overlapping symbol names in {names}")
        for name in names:
            if not _IDENT.match(name):
                raise PolynomialError(f"invalid symbol name {name!r}")

    @property
    def symbols(self) -> tuple[str, ...]:
        return self.variables + self.params

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def tower(self) -> FieldTower:
        return FieldTower(self.params)

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise PolynomialError(f"unknown symbol {name!r}") from None


def _reembed(terms: Mapping[Mono, Fraction], src: tuple[str, ...], dst: tuple[str, ...]) -> Terms:
    pos = []
    for s in src:
        pos.append(dst.index(s) if s in dst else None)
    out: Terms = {}
    for m, c in terms.items():
        new = [0] * len(dst)
        for e, p in zip(m, pos):
            if e:
                if p is None:
                    raise PolynomialError("symbol not present in target ring")
                new[p] = e
        out[tuple(new)] = c
    return out


# ---------------------------------------------------------------------------
# coefficients


class Coefficient:
    """An element of Q(params): numerator and denominator polynomials in the params."""

    __slots__ = ("params", "num", "den")

    def __init__(self, params: tuple[str, ...], num: Terms, den: Terms | None = None):
        self.params = params
        self.num = num
        self.den = den if den else {(0,) * len(params): Fraction(1)}

    def is_polynomial(self) -> bool:
        return _is_constant(self.den)

    def evaluate(self, values: Mapping[str, Fraction]) -> Fraction:
        n = _eval_all(self.num, self.params, values)
        d = _eval_all(self.den, self.params, values)
        if d == 0:
            raise PoleError("denominator vanishes at the assignment")
        return n / d

    def __eq__(self, other):
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self.params == other.params and _mul(self.num, other.den) == _mul(other.num, self.den)

    def __hash__(self):
        return hash((self.params, frozenset(self.num.items()), frozenset(self.den.items())))

    def __str__(self):
        num = _format_flat(self.num, self.params, len(self.params))
        if self.is_polynomial():
            return num
        return f"({num})/({_format_flat(self.den, self.params, len(self.params))})"

    __repr__ = __str__


def _eval_all(terms: Mapping[Mono, Fraction], names: tuple[str, ...], values: Mapping[str, Fraction]) -> Fraction:
    total = Fraction(0)
    vals = [Fraction(values[s]) for s in names]
    for m, c in terms.items():
        v = c
        for x, e in zip(vals, m):
            if e:
                v *= x**e
        total += v
    return total


def _reduce_fraction(num: Terms, den: Terms, nvars: int) -> tuple[Terms, Terms | None]:
    """Cancel the common factor of a numerator over (vars, params) and a denominator over params.

    Exact gcd is computed when a single parameter is involved; otherwise common
    monomials and exact divisibility of every numerator coefficient are removed.
    """
    if not num:
        return {}, None
    if _is_constant(den):
        c = next(iter(den.values()))
        return (num if c == 1 else _scale(num, 1 / c)), None
    _, lc = _lead(den)
    if lc != 1:
        den = _scale(den, 1 / lc)
        num = _scale(num, 1 / lc)
    groups: dict[Mono, Terms] = {}
    for m, c in num.items():
        groups.setdefault(m[:nvars], {})[m[nvars:]] = c
    involved = set()
    for poly in [den, *groups.values()]:
        for m in poly:
            involved.update(i for i, e in enumerate(m) if e)
    if len(involved) == 1:
        (i,) = involved
        g = _uni_gcd(_univariate(den, i), _univariate(den, i))
        for poly in groups.values():
            g = _uni_gcd(g, _univariate(poly, i))
            if max(g) == 0:
                break
        if max(g) > 0:
            gp = {tuple(e if k == i else 0 for k in range(len(next(iter(den))))): v for e, v in g.items()}
            den = _divide_exact(den, gp)
            groups = {zm: _divide_exact(p, gp) for zm, p in groups.items()}
    else:
        mg = _monomial_gcd(list(den) + [m for p in groups.values() for m in p])
        if any(mg):
            shift = lambda p: {tuple(a - b for a, b in zip(m, mg)): c for m, c in p.items()}
            den = shift(den)
            groups = {zm: shift(p) for zm, p in groups.items()}
        quots = {}
        for zm, p in groups.items():
            q = _divide_exact(p, den)
            if q is None:
                break
            quots[zm] = q
        else:
            groups = quots
            den = {(0,) * len(next(iter(den))): Fraction(1)}
    new_num = {zm + pm: c for zm, p in groups.items() for pm, c in p.items()}
    if _is_constant(den):
        c = next(iter(den.values()))
        return (new_num if c == 1 else _scale(new_num, 1 / c)), None
    _, lc = _lead(den)
    if lc != 1:
        den = _scale(den, 1 / lc)
        new_num = _scale(new_num, 1 / lc)
    return new_num, den


# ---------------------------------------------------------------------------
# parametric polynomials


class ParametricPolynomial:
    """Immutable element of Q(params)[variables]."""

    __slots__ = ("ring", "_num", "_den", "_hash")

    def __init__(self, ring: Ring, num: Mapping[Mono, Fraction] | None = None, den: Mapping[Mono, Fraction] | None = None):
        width = len(ring.symbols)
        clean = {}
        for m, c in (num or {}).items():
            if len(m) != width:
                raise PolynomialError(f"exponent {m} does not match ring width {width}")
            if any(e < 0 for e in m):
                raise PolynomialError(f"negative exponent in {m}")
            if c:
                clean[tuple(m)] = Fraction(c)
        d = None
        if den is not None:
            d = {tuple(m): Fraction(c) for m, c in den.items() if c}
            if not d:
                raise ZeroDivisionError("zero denominator")
            if any(len(m) != len(ring.params) for m in d):
                raise PolynomialError("denominator must be a polynomial in the parameters")
        if d is not None:
            clean, d = _reduce_fraction(clean, d, ring.n)
        self.ring = ring
        self._num = clean
        self._den = d
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "ParametricPolynomial":
        return cls(ring)

    @classmethod
    def constant(cls, ring: Ring, c) -> "ParametricPolynomial":
        return cls(ring, {(0,) * len(ring.symbols): Fraction(c)})

    @classmethod
    def symbol(cls, ring: Ring, name: str) -> "ParametricPolynomial":
        i = ring.index(name)
        m = [0] * len(ring.symbols)
        m[i] = 1
        return cls(ring, {tuple(m): Fraction(1)})

    @classmethod
    def from_terms(cls, ring: Ring, terms: Mapping[Mono, Coefficient | Fraction | int]) -> "ParametricPolynomial":
        """Build from a map z-exponent -> coefficient (Coefficient or rational)."""
        result = cls(ring)
        for alpha, coef in terms.items():
            if len(alpha) != ring.n:
                raise PolynomialError(f"exponent {alpha} does not match variable count {ring.n}")
            if isinstance(coef, Coefficient):
                num = {tuple(alpha) + pm: c for pm, c in coef.num.items()}
                result = result + cls(ring, num, coef.den)
            else:
                result = result + cls(ring, {tuple(alpha) + (0,) * len(ring.params): Fraction(coef)})
        return result

    # views ----------------------------------------------------------------

    @property
    def numerator(self) -> Terms:
        """Flat numerator over ``ring.symbols`` (read-only by convention)."""
        return self._num

    @property
    def denominator(self) -> Terms:
        return self._den or {(0,) * len(self.ring.params): Fraction(1)}

    def has_denominator(self) -> bool:
        return self._den is not None

    @property
    def terms(self) -> dict[Mono, Coefficient]:
        n = self.ring.n
        groups: dict[Mono, Terms] = {}
        for m, c in self._num.items():
            groups.setdefault(m[:n], {})[m[n:]] = c
        out = {}
        for alpha, pnum in groups.items():
            if self._den is None:
                out[alpha] = Coefficient(self.ring.params, pnum)
            else:
                sub = ParametricPolynomial(Ring((), self.ring.params), pnum, self._den)
                out[alpha] = Coefficient(self.ring.params, sub._num, sub._den)
        return out

    @property
    def support(self) -> frozenset[Mono]:
        n = self.ring.n
        return frozenset(m[:n] for m in self._num)

    def is_zero(self) -> bool:
        return not self._num

    def __bool__(self):
        return bool(self._num)

    def is_constant(self) -> bool:
        """True when no z-variable occurs (the value may still depend on params)."""
        return all(not any(m) for m in self.support)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.support), default=-1)

    def constant_term(self) -> "ParametricPolynomial":
        return self.restrict(())

    def symbols_used(self) -> frozenset[str]:
        used = set()
        for m in list(self._num) :
            used.update(s for s, e in zip(self.ring.symbols, m) if e)
        if self._den:
            for m in self._den:
                used.update(s for s, e in zip(self.ring.params, m) if e)
        return frozenset(used)

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "ParametricPolynomial":
        if isinstance(other, ParametricPolynomial):
            if other.ring != self.ring:
                raise PolynomialError("polynomials live in different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return ParametricPolynomial.constant(self.ring, other)
        return NotImplemented

    def _combine(self, other: "ParametricPolynomial", sign: int) -> "ParametricPolynomial":
        if self._den is None and other._den is None:
            return ParametricPolynomial(self.ring, _add(self._num, other._num, sign))
        w = len(self.ring.variables)
        lift = lambda d: {(0,) * w + m: c for m, c in d.items()}
        da, db = self.denominator, other.denominator
        num = _add(_mul(self._num, lift(db)), _mul(other._num, lift(da)), sign)
        return ParametricPolynomial(self.ring, num, _mul(da, db))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._combine(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._combine(self, -1)

    def __neg__(self):
        return ParametricPolynomial(self.ring, _scale(self._num, -1), self._den)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        num = _mul(self._num, other._num)
        if self._den is None and other._den is None:
            return ParametricPolynomial(self.ring, num)
        return ParametricPolynomial(self.ring, num, _mul(self.denominator, other.denominator))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PolynomialError("only non-negative integer powers are supported")
        result = ParametricPolynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParametricPolynomial.constant(self.ring, other)
        if not isinstance(other, ParametricPolynomial):
            return NotImplemented
        if self.ring != other.ring:
            return False
        if self._den is None and other._den is None:
            return self._num == other._num
        w = len(self.ring.variables)
        lift = lambda d: {(0,) * w + m: c for m, c in d.items()}
        return _mul(self._num, lift(other.denominator)) == _mul(other._num, lift(self.denominator))

    def __hash__(self):
        if self._hash is None:
            den = frozenset(self._den.items()) if self._den else None
            self._hash = hash((self.ring, frozenset(self._num.items()), den))
        return self._hash

    # calculus and substitution ------------------------------------------------

    def diff(self, name: str | int) -> "ParametricPolynomial":
        """Formal partial derivative by a variable (1-based index or name) or a parameter name."""
        if isinstance(name, int):
            if not 1 <= name <= self.ring.n:
                raise PolynomialError(f"variable index {name} out of range 1..{self.ring.n}")
            i = name - 1
        else:
            i = self.ring.index(name)
        dnum = _deriv(self._num, i)
        if self._den is None or i < self.ring.n:
            return ParametricPolynomial(self.ring, dnum, self._den)
        # quotient rule for a parameter appearing in the denominator
        j = i - self.ring.n
        w = self.ring.n
        lift = lambda d: {(0,) * w + m: c for m, c in d.items()}
        dden = _deriv(self._den, j)
        num = _add(_mul(dnum, lift(self._den)), _mul(self._num, lift(dden)), -1)
        return ParametricPolynomial(self.ring, num, _mul(self._den, self._den))

    def restrict(self, I: Iterable[int]) -> "ParametricPolynomial":
        """Restriction to the coordinate subspace C^I (1-based indices kept)."""
        keep = {i - 1 for i in I}
        n = self.ring.n
        num = {m: c for m, c in self._num.items() if all(m[i] == 0 for i in range(n) if i not in keep)}
        if self._den is None:
            return ParametricPolynomial(self.ring, num)
        return ParametricPolynomial(self.ring, num, self._den)

    def specialize(self, assignments: Mapping[str, Fraction | int]) -> "ParametricPolynomial":
        """Evaluate some parameters at rational values; they leave the ring."""
        if not assignments:
            return self
        for p in assignments:
            if p not in self.ring.params:
                raise PolynomialError(f"{p!r} is not a parameter of the ring")
        vals = {p: Fraction(v) for p, v in assignments.items()}
        new_params = tuple(p for p in self.ring.params if p not in vals)
        ring = Ring(self.ring.variables, new_params)
        n = self.ring.n
        pidx = [(k, vals.get(p)) for k, p in enumerate(self.ring.params)]

        def ev(terms, offset):
            out: Terms = {}
            for m, c in terms.items():
                v = c
                keep = list(m[:offset])
                for k, val in pidx:
                    e = m[offset + k]
                    if val is None:
                        keep.append(e)
                    elif e:
                        v *= val**e
                if v:
                    key = tuple(keep)
                    out[key] = out.get(key, 0) + v
            return _clean(out)

        num = ev(self._num, n)
        if self._den is None:
            return ParametricPolynomial(ring, num)
        den = ev(self._den, 0)
        if not den:
            raise PoleError(f"denominator vanishes at {dict(assignments)}")
        return ParametricPolynomial(ring, num, den)

    def evaluate(self, point: Mapping[str, Fraction | int]) -> Fraction:
        """Exact value at a full assignment of every symbol."""
        d = _eval_all(self.denominator, self.ring.params, point)
        if d == 0:
            raise PoleError("denominator vanishes at the point")
        return _eval_all(self._num, self.ring.symbols, point) / d

    def evaluate_mod(self, point: Mapping[str, int], p: int) -> int:
        """Value modulo a prime p at an integer point (denominators inverted mod p)."""

        def ev(terms, names):
            total = 0
            vals = [point[s] % p for s in names]
            for m, c in terms.items():
                v = c.numerator * pow(c.denominator, -1, p)
                for x, e in zip(vals, m):
                    if e:
                        v = v * pow(x, e, p)
                total += v
            return total % p

        d = ev(self.denominator, self.ring.params)
        if d == 0:
            raise PoleError("denominator vanishes modulo p at the point")
        return ev(self._num, self.ring.symbols) * pow(d, -1, p) % p

    def to_ring(self, ring: Ring) -> "ParametricPolynomial":
        """Re-embed into a ring containing every symbol this polynomial uses.

        Symbols may change role (a variable may become a parameter), provided no
        denominator would involve a variable.
        """
        num = _reembed(self._num, self.ring.symbols, ring.symbols)
        if self._den is None:
            return ParametricPolynomial(ring, num)
        try:
            den = _reembed(self._den, self.ring.params, ring.params)
        except PolynomialError:
            raise PolynomialError("denominator would depend on a ring variable") from None
        return ParametricPolynomial(ring, num, den)

    def cleared(self) -> "ParametricPolynomial":
        """The numerator as a polynomial (denominator dropped)."""
        return ParametricPolynomial(self.ring, self._num)

    def monic_content_free(self) -> "ParametricPolynomial":
        """Scale a denominator-free polynomial to a primitive integer form with positive lead."""
        if not self._num:
            return self
        lcm = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in self._num.values()), 1)
        ints = {m: int(c * lcm) for m, c in self._num.items()}
        g = reduce(math.gcd, ints.values())
        _, lc = _lead(ints)
        if lc < 0:
            g = -g
        return ParametricPolynomial(self.ring, {m: Fraction(v, g) for m, v in ints.items()})

    # printing -------------------------------------------------------------------

    def __str__(self):
        body = _format_flat(self._num, self.ring.symbols, self.ring.n)
        if self._den is None:
            return body
        return f"({body})/({_format_flat(self._den, self.ring.params, 0)})"

    def __repr__(self):
        return f"ParametricPolynomial({str(self)!r})"


def _canonical_key(m: Mono, nvars: int) -> tuple:
    z, p = m[:nvars], m[nvars:]
    return _grevlex_desc(z) + _grevlex_desc(p)


def _format_flat(terms: Mapping[Mono, Fraction], names: tuple[str, ...], nvars: int) -> str:
    """Canonical text: grevlex on variables (descending), then parameter degree."""
    if not terms:
        return "0"
    order = list(names[nvars:]) + list(names[:nvars])
    pos = [names.index(s) for s in order]
    pieces = []
    for m in sorted(terms, key=lambda m: _canonical_key(m, nvars)):
        c = terms[m]
        powers = []
        for p in pos:
            e = m[p]
            if e == 1:
                powers.append(names[p])
            elif e > 1:
                powers.append(f"{names[p]}^{e}")
        mag = abs(c)
        if powers:
            body = "*".join(powers) if mag == 1 else f"{mag}*" + "*".join(powers)
        else:
            body = str(mag)
        pieces.append(("-" if c < 0 else "+", body))
    out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("ident", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^":
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_polynomial(text: str, variables: Iterable[str], params: Iterable[str] = ()) -> ParametricPolynomial:
    """Parse a signed sum of products of rationals and powers ``name^k``.

    >>> str(parse_polynomial("t^2*z1^2 - z2^2", ["z1", "z2"], ["t"]))
    't^2*z1^2 - z2^2'
    """
    ring = Ring(tuple(variables), tuple(params))
    symbols = ring.symbols
    width = len(symbols)
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {kind}, found {what}", tok[2])
        i += 1
        return tok

    def factor():
        nonlocal i
        tok = peek()
        if tok[0] == "int":
            i += 1
            value = Fraction(tok[1])
            if peek()[0] == "/":
                i += 1
                den = take("int")
                if den[1] == 0:
                    raise PolynomialSyntaxError("division by zero", den[2])
                value /= den[1]
            return value, None
        if tok[0] == "ident":
            i += 1
            if tok[1] not in symbols:
                raise UnknownIdentifierError(tok[1], tok[2])
            exp = 1
            if peek()[0] == "^":
                i += 1
                if peek()[0] == "-":
                    raise NegativeExponentError(peek()[2])
                e = take("int")
                if e[1] < 1:
                    raise PolynomialSyntaxError("exponent must be at least 1", e[2])
                exp = e[1]
            return None, (symbols.index(tok[1]), exp)
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise PolynomialSyntaxError(f"expected a number or identifier, found {what}", tok[2])

    def term():
        nonlocal i
        coef = Fraction(1)
        mono = [0] * width
        while True:
            value, power = factor()
            if value is not None:
                coef *= value
            else:
                mono[power[0]] += power[1]
            if peek()[0] == "*":
                i += 1
                continue
            return tuple(mono), coef

    acc: Terms = {}
    sign = 1
    if peek()[0] in "+-":
        sign = -1 if peek()[0] == "-" else 1
        i += 1
    while True:
        m, c = term()
        v = acc.get(m, 0) + sign * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] not in "+-":
            raise PolynomialSyntaxError(f"expected '+' or '-', found {tok[1]!r}", tok[2])
        sign = -1 if tok[0] == "-" else 1
        i += 1
    return ParametricPolynomial(ring, acc)


# ---------------------------------------------------------------------------
# free-function API


def partial_derivative(f: ParametricPolynomial, i: int | str) -> ParametricPolynomial:
    return f.diff(i)


def restrict(f: ParametricPolynomial, I: Iterable[int]) -> ParametricPolynomial:
    return f.restrict(I)


def specialize(f: ParametricPolynomial, assignments: Mapping[str, Fraction | int]) -> ParametricPolynomial:
    return f.specialize(assignments)


def multiply(f: ParametricPolynomial, g: ParametricPolynomial) -> ParametricPolynomial:
    return f * g


def print_polynomial(f: ParametricPolynomial) -> str:
    return str(f)


# ---------------------------------------------------------------------------
# families


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class PolyFamily:
    """Factors f^1..f^k0 over Q(t) in variables z1..zn, each vanishing at z = 0."""

    factors: tuple[ParametricPolynomial, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise FamilyError("a family needs at least one factor")
        ring = factors[0].ring
        names = tuple(self.names) or tuple(f"f{k}" for k in range(1, len(factors) + 1))
        object.__setattr__(self, "names", names)
        if len(names) != len(factors) or len(set(names)) != len(names):
            raise FamilyError("factor names must be unique, one per factor")
        if len(ring.params) > 1:
            raise FamilyError("families carry at most one deformation parameter")
        for name, f in zip(names, factors):
            if f.ring != ring:
                raise FamilyError("all factors must share one ring")
            if f.is_constant():
                raise FamilyError(f"factor {name} is constant in z")
            if not f.constant_term().is_zero():
                raise FamilyError(f"factor {name} does not vanish at z = 0")

    @property
    def ring(self) -> Ring:
        return self.factors[0].ring

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def k0(self) -> int:
        return len(self.factors)

    @property
    def param(self) -> str | None:
        return self.ring.params[0] if self.ring.params else None

    def product(self) -> ParametricPolynomial:
        return reduce(lambda a, b: a * b, self.factors)

    def specialize(self, value) -> "PolyFamily":
        if self.param is None:
            return self
        return PolyFamily(tuple(f.specialize({self.param: value}) for f in self.factors), self.names)

    def permuted(self, order: Iterable[int]) -> "PolyFamily":
        order = list(order)
        return PolyFamily(tuple(self.factors[k] for k in order), tuple(self.names[k] for k in order))
