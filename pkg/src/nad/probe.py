"""Floating-point probes of the geometric conclusions: Whitney (b) along arcs,
Thom a_f, smoothness of nearby fibers and sphere transversality.

Everything here is EMPIRICAL: finite samples and trend fits, never proofs.
Polynomials are compiled from their exact form (including exact gradients)
and evaluated in complex double precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import ParametricPolynomial, PolyFamily

RANK_TOL = 1e-10
NOISE_FLOOR = 1e-12
DEFAULT_S_GRID = tuple(np.geomspace(1e-1, 1e-5, 16))


class ProbeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# compiled polynomials


class _Compiled:
    """f(t, z) = sum_a c_a(t) z^a with c_a rational functions of the single parameter."""

    def __init__(self, f: ParametricPolynomial):
        ring = f.ring
        self.n = ring.n
        terms = f.terms
        self.exps = np.array(sorted(terms), dtype=np.int64).reshape(len(terms), ring.n)
        coeffs = [terms[tuple(a)] for a in self.exps]
        self._num = [self._poly(c.num) for c in coeffs]
        self._den = [self._poly(c.den) for c in coeffs]
        self.t_free = all(len(p) == 1 and p[0][0] == 0 for p in self._num + self._den)

    @staticmethod
    def _poly(terms) -> list[tuple[int, complex]]:
        return sorted((m[0] if m else 0, float(c)) for m, c in terms.items())

    def coefficients(self, t: complex) -> np.ndarray:
        def ev(p):
            return sum(c * t**e for e, c in p)

        return np.array([ev(a) / ev(b) for a, b in zip(self._num, self._den)], dtype=complex)

    def __call__(self, t: complex, z: np.ndarray) -> np.ndarray:
        """Values at points z of shape (..., n)."""
        z = np.asarray(z, dtype=complex)
        monos = np.prod(z[..., None, :] ** self.exps, axis=-1)
        return monos @ self.coefficients(t)


class NumericFamily:
    """Factors with exact z- and t-gradients, optionally in a unitary frame z = M y."""

    def __init__(self, family: PolyFamily, frame: np.ndarray | None = None):
        self.family = family
        self.n = family.n
        self.param = family.param
        self.frame = np.eye(self.n, dtype=complex) if frame is None else np.asarray(frame, dtype=complex)
        self.factors = [_Compiled(f) for f in family.factors]
        self.grads = [[_Compiled(f.diff(v)) for v in family.ring.variables] for f in family.factors]
        if self.param is not None:
            self.tgrads = [_Compiled(f.diff(self.param)) for f in family.factors]
        else:
            self.tgrads = [None for _ in family.factors]
        prod = family.product()
        self.product = _Compiled(prod)
        self.product_grad = [_Compiled(prod.diff(v)) for v in family.ring.variables]
        self.product_tgrad = _Compiled(prod.diff(self.param)) if self.param is not None else None
        self.degree = prod.total_degree()

    def to_z(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(y, dtype=complex) @ self.frame.T

    def to_y(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=complex) @ self.frame.conj()

    def value(self, k: int, t: complex, y) -> complex:
        return complex(self.factors[k](t, self.to_z(y)))

    def row(self, k: int, t: complex, y) -> np.ndarray:
        """(df/dt, df/dy) of factor k at (t, y)."""
        z = self.to_z(y)
        gz = np.array([complex(g(t, z)) for g in self.grads[k]])
        dt = complex(self.tgrads[k](t, z)) if self.tgrads[k] is not None else 0j
        return np.concatenate([[dt], gz @ self.frame])

    def product_value(self, t: complex, y) -> complex:
        return complex(self.product(t, self.to_z(y)))

    def product_row(self, t: complex, y) -> np.ndarray:
        z = self.to_z(y)
        gz = np.array([complex(g(t, z)) for g in self.product_grad])
        dt = complex(self.product_tgrad(t, z)) if self.product_tgrad is not None else 0j
        return np.concatenate([[dt], gz @ self.frame])

    def coordinate_row(self, i: int) -> np.ndarray:
        """Row expressing z_i (1-based) as a linear form in (t, y)."""
        return np.concatenate([[0j], self.frame[i - 1]])


# ---------------------------------------------------------------------------
# linear algebra helpers


def orthonormal_nullspace(A: np.ndarray, width: int) -> tuple[np.ndarray, bool]:
    """Orthonormal basis (columns) of ker A and whether A had full row rank.

    Rows are normalized first so the rank decision is scale free.
    """
    if A.size == 0:
        return np.eye(width, dtype=complex), True
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        full = False
        A = A[norms > 0]
        norms = norms[norms > 0]
        if A.size == 0:
            return np.eye(width, dtype=complex), full
    else:
        full = True
    B = A / norms[:, None]
    _, sv, vh = np.linalg.svd(B)
    rank = int(np.sum(sv > RANK_TOL * sv[0]))
    full = full and rank == B.shape[0]
    return vh[rank:].conj().T, full


def line_to_space_distance(v: np.ndarray, Q: np.ndarray) -> float:
    """Sine of the angle between the complex line through v and the span of Q's orthonormal columns."""
    nv = np.linalg.norm(v)
    if nv == 0:
        return 0.0
    u = v / nv
    r = u - Q @ (Q.conj().T @ u) if Q.size else u
    return float(min(1.0, max(0.0, np.linalg.norm(r))))


def space_to_hyperplane_distance(Q: np.ndarray, normal: np.ndarray) -> float:
    """max over unit v in span Q of the sine of its angle to ker(normal)."""
    if Q.size == 0:
        return 0.0
    a = normal / np.linalg.norm(normal)
    return float(min(1.0, np.linalg.norm(a @ Q)))


def gauss_newton(F, Jac, x0: np.ndarray, iterations: int = 100) -> tuple[np.ndarray, float]:
    """Minimum-norm Newton steps towards F(x) = 0 from x0.

    Stops when the residual vanishes, stops decreasing, or the step is
    negligible relative to |x|; absolute residual thresholds would be
    meaningless for points very close to the origin.
    """
    x = np.array(x0, dtype=complex)
    r = F(x)
    res = float(np.linalg.norm(r))
    for _ in range(iterations):
        if res == 0:
            break
        step = np.linalg.lstsq(Jac(x), r, rcond=None)[0]
        x_new = x - step
        r_new = F(x_new)
        res_new = float(np.linalg.norm(r_new))
        if not np.isfinite(res_new) or res_new >= res:
            break
        x, r, res = x_new, r_new, res_new
        if np.linalg.norm(step) <= 1e-16 * max(float(np.linalg.norm(x)), 1e-300):
            break
    return x, res


# ---------------------------------------------------------------------------
# arcs


@dataclass(frozen=True)
class Series:
    """Truncated power series sum c_k s^e_k."""

    terms: tuple[tuple[complex, float], ...] = ()

    def __call__(self, s: float) -> complex:
        return sum((c * s**e if e else c) for c, e in self.terms) if self.terms else 0j

    @property
    def order(self) -> float:
        nz = [e for c, e in self.terms if c != 0]
        return min(nz) if nz else math.inf

    def leading(self) -> complex:
        o = self.order
        return sum(c for c, e in self.terms if e == o) if math.isfinite(o) else 0j

    def substitute_power(self, k: int) -> "Series":
        return Series(tuple((c, e * k) for c, e in self.terms))


_TERM = re.compile(r"^(?P<coef>\([^)]*\)|(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?j?|j)?\*?(?P<s>s(\^(?P<exp>[0-9.]+))?)?$")


def parse_series(text: str) -> Series:
    """Parse e.g. ``"0.5 + 2*s - (1+1j)*s^2"``; coefficients may be parenthesized complex literals."""
    src = text.replace(" ", "")
    if not src:
        raise ProbeError("empty series")
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(src):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and src[i - 1] not in "eE(^*":
            parts.append(src[start:i])
            start = i
    parts.append(src[start:])
    terms = []
    for part in parts:
        sign = 1
        while part and part[0] in "+-":
            sign = -sign if part[0] == "-" else sign
            part = part[1:]
        m = _TERM.match(part)
        if not part or not m or (m.group("coef") is None and m.group("s") is None):
            raise ProbeError(f"cannot parse series term {part!r} in {text!r}")
        coef = m.group("coef")
        try:
            c = complex(coef.strip("()")) if coef else 1
        except ValueError:
            raise ProbeError(f"bad coefficient {coef!r}") from None
        e = 0.0
        if m.group("s"):
            e = float(m.group("exp")) if m.group("exp") else 1.0
        terms.append((sign * c, e))
    return Series(tuple(terms))


@dataclass(frozen=True)
class Arc:
    """s -> (t(s), z_1(s), ..., z_n(s)) given by truncated series."""

    t: Series
    z: tuple[Series, ...]

    def __call__(self, s: float) -> np.ndarray:
        return np.array([self.t(s)] + [c(s) for c in self.z], dtype=complex)

    @property
    def weights(self) -> tuple[float, ...]:
        return (self.t.order,) + tuple(c.order for c in self.z)

    @property
    def leading(self) -> tuple[complex, ...]:
        return (self.t.leading(),) + tuple(c.leading() for c in self.z)

    def reparametrized(self, k: int) -> "Arc":
        return Arc(self.t.substitute_power(k), tuple(c.substitute_power(k) for c in self.z))


def parse_arc(text: str, n: int) -> Arc:
    """``t-series ; z1-series ; ... ; zn-series``."""
    parts = [p.strip() for p in text.split(";")]
    if len(parts) != n + 1:
        raise ProbeError(f"an arc needs {n + 1} ';'-separated series (t then z1..z{n}), got {len(parts)}")
    series = [parse_series(p) for p in parts]
    return Arc(series[0], tuple(series[1:]))


def parse_arc_pair(text: str, n: int) -> tuple[Arc, Arc | None]:
    """``big-arc | small-arc``; the small arc is optional."""
    if "|" in text:
        big, small = text.split("|", 1)
        return parse_arc(big, n), parse_arc(small, n)
    return parse_arc(text, n), None


# ---------------------------------------------------------------------------
# results


@dataclass
class Sample:
    s: float
    distance: float | None
    residual: float
    flag: str = "ok"  # ok | zero-secant | singular-sample | off-stratum


@dataclass
class ProbeResult:
    kind: str
    samples: list[Sample]
    trend: str
    exponent: float | None
    final_distance: float | None
    notes: list[str] = field(default_factory=list)
    seed: int | None = None
    label: str = "EMPIRICAL"

    @property
    def passed(self) -> bool:
        return self.trend in ("converging", "pass")


def fit_trend(s: Sequence[float], d: Sequence[float], tol: float = 1e-3) -> tuple[str, float | None]:
    """Power-law fit d ~ C s^beta over the last decade of s.

    Distances at the noise floor throughout that decade give beta = +inf.
    """
    s = np.asarray(s, dtype=float)
    d = np.asarray(d, dtype=float)
    smin = s.min()
    window = s <= 10 * smin * (1 + 1e-9)
    sw, dw = s[window], d[window]
    if np.all(dw <= NOISE_FLOOR):
        beta = math.inf
    else:
        keep = dw > NOISE_FLOOR
        if keep.sum() < 2:
            beta = math.inf if dw[np.argmin(sw)] <= NOISE_FLOOR else 0.0
        else:
            beta = float(np.polyfit(np.log(sw[keep]), np.log(dw[keep]), 1)[0])
    final = float(d[np.argmin(s)])
    trend = "converging" if beta > 0 and final < tol else "not-converging"
    return trend, beta


# ---------------------------------------------------------------------------
# stratum geometry


def _stratum_system(nf: NumericFamily, J: frozenset[int], L: frozenset[int]):
    off = [i for i in range(1, nf.n + 1) if i not in J]

    def F(x):
        t, y = x[0], x[1:]
        vals = [nf.coordinate_row(i) @ x for i in off]
        vals += [nf.value(k - 1, t, y) for k in sorted(L)]
        return np.array(vals, dtype=complex)

    def Jac(x):
        t, y = x[0], x[1:]
        rows = [nf.coordinate_row(i) for i in off]
        rows += [nf.row(k - 1, t, y) for k in sorted(L)]
        return np.array(rows, dtype=complex).reshape(len(rows), nf.n + 1)

    return F, Jac


def tangent_space(nf: NumericFamily, J: frozenset[int], L: frozenset[int], x: np.ndarray) -> tuple[np.ndarray, bool]:
    """Tangent space of S^J(L) at x = (t, y) inside C x C^n, and whether the defining forms are independent."""
    _, Jac = _stratum_system(nf, J, L)
    A = Jac(x)
    return orthonormal_nullspace(A, nf.n + 1)


def project_to_stratum(nf: NumericFamily, J: frozenset[int], L: frozenset[int], x0: np.ndarray) -> tuple[np.ndarray, float]:
    F, Jac = _stratum_system(nf, J, L)
    if not len(F(x0)):
        return np.array(x0, dtype=complex), 0.0
    return gauss_newton(F, Jac, x0)


def _on_open_stratum(nf: NumericFamily, J, L, x: np.ndarray) -> bool:
    z = nf.to_z(x[1:])
    scale = max(1.0, float(np.linalg.norm(x)))
    if any(abs(z[i - 1]) <= 1e-14 * scale for i in J):
        return False
    vals = [abs(nf.value(k - 1, x[0], x[1:])) for k in range(1, len(nf.factors) + 1) if k not in L]
    return all(v > 1e-300 for v in vals)


# ---------------------------------------------------------------------------
# Whitney (b)


def default_arcs(nf: NumericFamily, small, big, t0: float = 0.0, seed: int = 0) -> tuple[Arc, Arc]:
    """Arcs through (t0, 0) for a pair whose small stratum is the t-axis.

    The big arc starts from seeded random linear terms on the coordinates of J
    and is projected onto S^J(L) sample by sample.
    """
    I, _ = small
    J, _ = big
    if I:
        raise ProbeError("default arcs are only available when the small stratum is the t-axis; pass --arc")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(nf.n) + 1j * rng.standard_normal(nf.n)
    z = tuple(Series(((complex(a[i]), 1.0),)) if (i + 1) in J else Series() for i in range(nf.n))
    zero = tuple(Series() for _ in range(nf.n))
    big_arc = Arc(Series(((complex(t0), 0.0), (0.5 + 0j, 1.0))), z)
    small_arc = Arc(Series(((complex(t0), 0.0), (0.5 + 0j, 1.0), (0.25 + 0j, 2.0))), zero)
    return big_arc, small_arc


def probe_whitney_b(
    nf: NumericFamily,
    small: tuple[frozenset[int], frozenset[int]],
    big: tuple[frozenset[int], frozenset[int]],
    big_arc: Arc,
    small_arc: Arc,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    tol: float = 1e-3,
    project: bool = True,
) -> ProbeResult:
    """Distance from the secant l(s) = rho(s) - rho'(s) to T_rho(s) S^J(L) along the arcs."""
    I, K = frozenset(small[0]), frozenset(small[1])
    J, L = frozenset(big[0]), frozenset(big[1])
    notes = []
    start_big, start_small = big_arc(0.0), small_arc(0.0)
    start_big = np.concatenate([[start_big[0]], nf.to_y(start_big[1:])])
    start_small = np.concatenate([[start_small[0]], nf.to_y(start_small[1:])])
    if np.linalg.norm(start_big - start_small) > 1e-10:
        raise ProbeError("the two arcs must start at the same point")
    F_small, _ = _stratum_system(nf, I, K)
    if len(F_small(start_small)) and np.linalg.norm(F_small(start_small)) > 1e-10:
        raise ProbeError("the arcs do not start on the small stratum")
    samples = []
    for s in sorted(s_grid, reverse=True):
        xb = big_arc(s)
        xb = np.concatenate([[xb[0]], nf.to_y(xb[1:])])
        xs = small_arc(s)
        xs = np.concatenate([[xs[0]], nf.to_y(xs[1:])])
        if project:
            xb, res_b = project_to_stratum(nf, J, L, xb)
            xs, res_s = project_to_stratum(nf, I, K, xs)
        else:
            F_b, _ = _stratum_system(nf, J, L)
            res_b = float(np.linalg.norm(F_b(xb))) if len(F_b(xb)) else 0.0
            res_s = 0.0
        residual = max(res_b, res_s)
        if residual > 1e-9 or not _on_open_stratum(nf, J, L, xb):
            samples.append(Sample(float(s), None, residual, "off-stratum"))
            continue
        ell = xb - xs
        Q, full = tangent_space(nf, J, L, xb)
        if np.linalg.norm(ell) == 0:
            samples.append(Sample(float(s), 0.0, residual, "zero-secant"))
            continue
        if not full:
            samples.append(Sample(float(s), None, residual, "singular-sample"))
            continue
        samples.append(Sample(float(s), line_to_space_distance(ell, Q), residual))
    return _summarize("whitney", samples, tol, notes)


def _summarize(kind: str, samples: list[Sample], tol: float, notes: list[str]) -> ProbeResult:
    if not samples:
        return ProbeResult(kind, samples, "not-converging", None, None, notes + ["no samples"])
    smin = min(x.s for x in samples)
    last = [x for x in samples if x.s <= 10 * smin * (1 + 1e-9)]
    if any(x.flag == "singular-sample" for x in last):
        return ProbeResult(kind, samples, "singular-sample", None, None, notes)
    if any(x.flag == "off-stratum" for x in last):
        return ProbeResult(kind, samples, "not-converging", None, None, notes + ["arc left the stratum"])
    good = [x for x in samples if x.distance is not None]
    if any(x.flag == "zero-secant" for x in samples):
        notes.append("zero secant at some samples (distance defined as 0)")
    trend, beta = fit_trend([x.s for x in good], [x.distance for x in good], tol)
    if beta == math.inf:
        notes.append("distances at machine precision over the last decade; decay exponent reported as +inf")
    final = min(good, key=lambda x: x.s).distance
    return ProbeResult(kind, samples, trend, beta, final, notes)


# ---------------------------------------------------------------------------
# Thom a_f


def probe_thom_af(
    nf: NumericFamily,
    stratum: tuple[frozenset[int], frozenset[int]],
    q: np.ndarray,
    points: Sequence[np.ndarray] | None = None,
    s_grid: Sequence[float] = DEFAULT_S_GRID,
    tol: float = 1e-3,
    seed: int = 0,
) -> ProbeResult:
    """max_{v in T_q S} dist(v, ker dF(q_m)) for samples q_m -> q off V(F), F = f as a function of (t, z).

    Without explicit points, q_m = q + s v with a seeded random unit direction v.
    """
    I, K = frozenset(stratum[0]), frozenset(stratum[1])
    q = np.asarray(q, dtype=complex)
    F_s, _ = _stratum_system(nf, I, K)
    if len(F_s(q)) and np.linalg.norm(F_s(q)) > 1e-10:
        raise ProbeError("q is not on the stratum")
    Q, full = tangent_space(nf, I, K, q)
    notes = []
    if not full:
        notes.append("stratum defining forms dependent at q")
    if points is None:
        rng = np.random.default_rng(seed)
        v = rng.standard_normal(nf.n + 1) + 1j * rng.standard_normal(nf.n + 1)
        v /= np.linalg.norm(v)
        pts = [(float(s), q + s * v) for s in sorted(s_grid, reverse=True)]
    else:
        pts = [(float(np.linalg.norm(p - q)), np.asarray(p, dtype=complex)) for p in points]
    samples = []
    for s, p in pts:
        val = nf.product_value(p[0], p[1:])
        grad = nf.product_row(p[0], p[1:])
        if val == 0:
            samples.append(Sample(s, None, 0.0, "off-stratum"))
            continue
        if np.linalg.norm(grad[1:]) < 1e-300 or np.linalg.norm(grad) < 1e-15 * max(1.0, abs(val)):
            samples.append(Sample(s, None, abs(val), "singular-sample"))
            continue
        samples.append(Sample(s, space_to_hyperplane_distance(Q, grad), abs(val)))
    return _summarize("thom", samples, tol, notes)


# ---------------------------------------------------------------------------
# sampling fibers


def _cell_rng(seed: int, *keys: float) -> np.random.Generator:
    words = [seed & 0xFFFFFFFF]
    for k in keys:
        words.extend(np.frombuffer(np.float64(k).tobytes(), dtype=np.uint32).tolist())
    return np.random.default_rng(np.random.SeedSequence(words))


def _roots_on_lines(nf: NumericFamily, t: complex, eta: complex, P: np.ndarray, V: np.ndarray, r: float):
    """Points p + lambda v with f_t = eta and norm <= r, for every line (p, v)."""
    d = max(nf.degree, 1)
    m = 2 * d + 2
    R = 2.0 * r
    nodes = R * np.exp(2j * np.pi * np.arange(m) / m)
    pts = P[:, None, :] + nodes[None, :, None] * V[:, None, :]
    z = pts @ nf.frame.T
    vals = nf.product(t, z) - eta
    coef = np.fft.fft(vals, axis=1) / m
    coef = coef[:, : d + 1] / R ** np.arange(d + 1)
    out = []
    for line in range(P.shape[0]):
        c = coef[line]
        scale = np.max(np.abs(c))
        top = d
        while top > 0 and abs(c[top]) <= 1e-13 * scale:
            top -= 1
        if top == 0:
            continue
        lam = np.roots(c[: top + 1][::-1])
        for root in sorted(lam, key=lambda x: (x.real, x.imag)):
            y = P[line] + root * V[line]
            for _ in range(3):
                g = nf.product_value(t, y) - eta
                dg = nf.product_row(t, y)[1:] @ V[line]
                if dg == 0:
                    break
                root = root - g / dg
                y = P[line] + root * V[line]
            if np.linalg.norm(y) <= r and abs(nf.product_value(t, y) - eta) <= 1e-9 * (1 + abs(eta)):
                out.append(y)
    return out


@dataclass
class FiberCell:
    t: complex
    eta: complex
    samples: int
    bad: int
    worst_margin: float
    lines_skipped: int


@dataclass
class FiberResult:
    passed: bool
    worst_margin: float
    cells: list[FiberCell]
    bad_samples: int
    total_samples: int
    tolerance: float
    seed: int
    notes: list[str] = field(default_factory=list)
    label: str = "EMPIRICAL"


def t_grid(tau: float, count: int) -> list[float]:
    return [float(x) for x in np.linspace(-tau, tau, count)] if count > 1 else [0.0]


def eta_grid(delta: float, count: int) -> list[complex]:
    return [complex(delta * m / count * np.exp(2j * np.pi * m / count)) for m in range(1, count + 1)]


def _random_ball(rng: np.random.Generator, count: int, n: int, r: float):
    raw = rng.standard_normal((count, 4 * n + 1))
    p = raw[:, :n] + 1j * raw[:, n : 2 * n]
    p /= np.linalg.norm(p, axis=1)[:, None]
    radius = r * (np.abs(np.tanh(raw[:, 4 * n])) ** (1.0 / (2 * n)))
    v = raw[:, 2 * n : 3 * n] + 1j * raw[:, 3 * n : 4 * n]
    v /= np.linalg.norm(v, axis=1)[:, None]
    return p * radius[:, None], v


def probe_uniform_nonsingular(
    nf: NumericFamily,
    tau: float,
    r: float,
    delta: float,
    t_count: int = 10,
    eta_count: int = 10,
    samples: int = 200,
    tol: float = 1e-8,
    seed: int = 0,
) -> FiberResult:
    """||grad f_t|| > tol at sampled points of V(f_t - eta) within the ball of radius r."""
    if delta <= 0:
        raise ProbeError("delta must be positive (eta = 0 is excluded)")
    cells = []
    worst = math.inf
    notes = []
    for t in t_grid(tau, t_count):
        for eta in eta_grid(delta, eta_count):
            if eta == 0:
                raise ProbeError("eta must be non-zero")
            rng = _cell_rng(seed, t, eta.real, eta.imag)
            found: list[np.ndarray] = []
            skipped = 0
            batch = 0
            while len(found) < samples and batch < 20:
                P, V = _random_ball(rng, samples, nf.n, r)
                pts = _roots_on_lines(nf, t, eta, P, V, r)
                skipped += samples - len(pts) if len(pts) < samples else 0
                found.extend(pts)
                batch += 1
            found = found[:samples]
            bad = 0
            cell_worst = math.inf
            for y in found:
                margin = float(np.linalg.norm(nf.product_row(t, y)[1:]))
                cell_worst = min(cell_worst, margin)
                if margin <= tol:
                    bad += 1
            if len(found) < samples:
                notes.append(f"t={t:g} eta={eta:.3g}: only {len(found)} sample points found")
            worst = min(worst, cell_worst)
            cells.append(FiberCell(complex(t), eta, len(found), bad, cell_worst, skipped))
    total = sum(c.samples for c in cells)
    bad_total = sum(c.bad for c in cells)
    return FiberResult(bad_total == 0 and total > 0, worst, cells, bad_total, total, tol, seed, notes)


# ---------------------------------------------------------------------------
# stable radius


@dataclass
class RadiusEstimate:
    estimate: float
    radii: list[float]
    margins: dict  # radius -> worst margin over (t, eta) samples
    empty_cells: int
    tolerance: float
    seed: int
    notes: list[str] = field(default_factory=list)
    label: str = "EMPIRICAL"


def transversality_margin(nf: NumericFamily, t: complex, y: np.ndarray) -> float:
    """Sine of the angle between the position vector and the normal line of the fiber at y."""
    g = nf.product_row(t, y)[1:]
    ng, ny = np.linalg.norm(g), np.linalg.norm(y)
    if ng == 0 or ny == 0:
        return 0.0
    c = abs(np.dot(y, g)) / (ng * ny)
    return float(math.sqrt(max(0.0, 1.0 - c * c)))


def _sphere_fiber_points(nf, t, eta, eps, rng, count):
    """Real Gauss-Newton from random sphere points onto {f_t = eta, |z| = eps}."""
    n = nf.n
    raw = rng.standard_normal((count, 2 * n))
    out = []
    for row in raw:
        y = row[:n] + 1j * row[n:]
        y *= eps / np.linalg.norm(y)
        for _ in range(40):
            f = nf.product_value(t, y) - eta
            g = nf.product_row(t, y)[1:]
            sph = float(np.vdot(y, y).real - eps * eps)
            res = np.array([f.real, f.imag, sph])
            if np.linalg.norm(res) < 1e-14:
                break
            A = np.zeros((3, 2 * n))
            A[0, :n], A[0, n:] = g.real, -g.imag
            A[1, :n], A[1, n:] = g.imag, g.real
            A[2, :n], A[2, n:] = 2 * y.real, 2 * y.imag
            step = np.linalg.lstsq(A, res, rcond=None)[0]
            y = y - (step[:n] + 1j * step[n:])
        f = nf.product_value(t, y) - eta
        if abs(f) <= 1e-10 * (1 + abs(eta)) and abs(np.linalg.norm(y) - eps) <= 1e-10 * max(eps, 1):
            out.append(y)
    return out


def estimate_stable_radius(
    nf: NumericFamily,
    tau: float,
    r_max: float,
    radii: Sequence[float] | None = None,
    t_count: int = 5,
    eta_count: int = 4,
    delta: float = 1e-8,
    samples: int = 20,
    tol: float = 1e-6,
    seed: int = 0,
) -> RadiusEstimate:
    """Largest grid radius r such that every sampled sphere of radius <= r is transverse to every sampled fiber."""
    if radii is None:
        radii = np.geomspace(r_max / 8, r_max, 4)
    radii = sorted(float(x) for x in radii)
    margins = {}
    empty = 0
    notes = []
    for eps in radii:
        worst = math.inf
        for t in t_grid(tau, t_count):
            for eta in eta_grid(delta, eta_count):
                rng = _cell_rng(seed, t, eta.real, eta.imag, eps)
                pts = _sphere_fiber_points(nf, t, eta, eps, rng, samples)
                if not pts:
                    empty += 1
                    continue
                for y in pts:
                    worst = min(worst, transversality_margin(nf, t, y))
        margins[eps] = worst
    estimate = 0.0
    for eps in radii:
        if margins[eps] > tol:
            estimate = eps
        else:
            break
    if empty:
        notes.append(f"{empty} (t, eta, radius) cells had no sample points")
    return RadiusEstimate(estimate, radii, margins, empty, tol, seed, notes)
