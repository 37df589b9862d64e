import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import family
from nad.poly import PolyFamily
from nad.probe import (
    Arc,
    NumericFamily,
    ProbeError,
    Series,
    default_arcs,
    estimate_stable_radius,
    fit_trend,
    line_to_space_distance,
    orthonormal_nullspace,
    parse_arc,
    parse_arc_pair,
    parse_series,
    probe_thom_af,
    probe_uniform_nonsingular,
    probe_whitney_b,
    transversality_margin,
)

T_AXIS = (frozenset(), frozenset({1}))
SMOOTH = (frozenset({1, 2}), frozenset({1}))
GRID = list(np.geomspace(1e-1, 1e-4, 13))


def unitary(n, seed):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return q


def distances(result):
    return [x.distance for x in result.samples]


class TestSeries:
    def test_parse(self):
        s = parse_series("0.5 + 2*s - (1+1j)*s^2")
        assert s.terms == ((0.5, 0.0), (2, 1.0), (-(1 + 1j), 2.0))
        assert s(0.1) == pytest.approx(0.5 + 0.2 - (1 + 1j) * 0.01)
        assert s.order == 0 and s.leading() == 0.5

    def test_parse_exponent_float_and_sign(self):
        s = parse_series("-s^1.5 + 3e-2*s")
        assert s.terms == ((-1, 1.5), (0.03, 1.0))

    @pytest.mark.parametrize("bad", ["", "2*x", "s^", "(1+*s"])
    def test_errors(self, bad):
        with pytest.raises(ProbeError):
            parse_series(bad)

    def test_arcs(self):
        arc = parse_arc("s; 2*s; s^2", 2)
        assert arc.weights == (1.0, 1.0, 2.0)
        assert np.allclose(arc(0.5), [0.5, 1.0, 0.25])
        big, small = parse_arc_pair("s;s;s | s;0;0", 2)
        assert small.weights == (1.0, math.inf, math.inf)
        with pytest.raises(ProbeError):
            parse_arc("s;s", 2)


class TestLinearAlgebra:
    def test_nullspace_and_distance(self):
        A = np.array([[1.0, 0, 0]], dtype=complex)
        Q, full = orthonormal_nullspace(A, 3)
        assert full and Q.shape == (3, 2)
        assert line_to_space_distance(np.array([1, 1, 0], dtype=complex), Q) == pytest.approx(math.sqrt(0.5))

    def test_rank_deficient(self):
        A = np.array([[1.0, 1.0], [2.0, 2.0]], dtype=complex)
        _, full = orthonormal_nullspace(A, 2)
        assert not full

    def test_fit_trend(self):
        s = np.geomspace(1e-1, 1e-4, 10)
        trend, beta = fit_trend(s, 3 * s**2)
        assert trend == "converging" and beta == pytest.approx(2.0)
        assert fit_trend(s, np.zeros_like(s))[1] == math.inf
        assert fit_trend(s, np.ones_like(s))[0] == "not-converging"


class TestWhitney:
    def test_cone_converges(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        big, small = default_arcs(nf, T_AXIS, SMOOTH)
        r = probe_whitney_b(nf, T_AXIS, SMOOTH, big, small, GRID)
        assert r.passed and r.exponent > 0
        assert r.final_distance < 1e-3

    def test_zariski_smooth_part_converges(self):
        nf = NumericFamily(family("t^2*z1^2 - z2^2"))
        big, small = default_arcs(nf, T_AXIS, SMOOTH)
        r = probe_whitney_b(nf, T_AXIS, SMOOTH, big, small, GRID)
        assert r.trend == "converging"

    def test_unitary_invariance(self):
        fam = family("z1^2 + z2^2 + t*z1*z2")
        plain = NumericFamily(fam)
        big, small = default_arcs(plain, T_AXIS, SMOOTH, seed=3)
        ref = distances(probe_whitney_b(plain, T_AXIS, SMOOTH, big, small, GRID[:8]))
        for seed in range(3):
            rotated = NumericFamily(fam, unitary(2, seed))
            got = distances(probe_whitney_b(rotated, T_AXIS, SMOOTH, big, small, GRID[:8]))
            assert np.allclose(got, ref, atol=1e-9, rtol=1e-6)

    def test_reparametrization(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        big, small = default_arcs(nf, T_AXIS, SMOOTH, seed=1)
        grid = list(np.geomspace(1e-1, 1e-3, 7))
        ref = probe_whitney_b(nf, T_AXIS, SMOOTH, big, small, grid)
        sq = probe_whitney_b(nf, T_AXIS, SMOOTH, big.reparametrized(2), small.reparametrized(2), [math.sqrt(s) for s in grid])
        assert np.allclose(distances(sq), distances(ref), atol=1e-12, rtol=1e-6)

    @pytest.mark.parametrize("c", [Fraction(2), Fraction(-1, 3), Fraction(7)])
    def test_scaling_a_factor(self, c):
        fam = family("z1^2 + z2^2 + t*z1*z2")
        a = NumericFamily(fam)
        b = NumericFamily(PolyFamily((fam.factors[0] * c,)))
        big, small = default_arcs(a, T_AXIS, SMOOTH, seed=2)
        da = distances(probe_whitney_b(a, T_AXIS, SMOOTH, big, small, GRID[:6]))
        db = distances(probe_whitney_b(b, T_AXIS, SMOOTH, big, small, GRID[:6]))
        assert np.allclose(da, db, atol=1e-12, rtol=1e-6)

    def test_arcs_must_share_start(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        big = parse_arc("1 + s; s; (1j)*s", 2)
        small = parse_arc("s; 0; 0", 2)
        with pytest.raises(ProbeError):
            probe_whitney_b(nf, T_AXIS, SMOOTH, big, small, GRID)

    def test_default_arcs_need_t_axis(self):
        nf = NumericFamily(family("z1", "z2"))
        with pytest.raises(ProbeError):
            default_arcs(nf, (frozenset({1}), frozenset({2})), (frozenset({1, 2}), frozenset({1})))


class TestThom:
    def test_quadric_t_axis(self):
        nf = NumericFamily(family("z1^2 + z2^2 + t*z1*z2"))
        r = probe_thom_af(nf, T_AXIS, np.zeros(3, dtype=complex), s_grid=GRID)
        assert r.passed and r.exponent > 0

    def test_point_must_lie_on_stratum(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        with pytest.raises(ProbeError):
            probe_thom_af(nf, T_AXIS, np.array([0, 1, 0], dtype=complex))


class TestFiber:
    def test_small_grid_passes(self):
        nf = NumericFamily(family("z1^2 + z2^2 + t*z1*z2"))
        r = probe_uniform_nonsingular(nf, 0.1, 0.5, 0.01, t_count=3, eta_count=3, samples=40)
        assert r.passed and r.bad_samples == 0 and r.total_samples == 360

    def test_eta_zero_guard(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        with pytest.raises(ProbeError):
            probe_uniform_nonsingular(nf, 0.1, 0.5, 0.0)

    def test_singular_fiber_is_flagged(self):
        # z1*(z1 + z2^2) at the origin fiber level: tiny eta puts samples near the singular point
        nf = NumericFamily(family("z1^2"))
        r = probe_uniform_nonsingular(nf, 0.0, 0.5, 1e-20, t_count=1, eta_count=2, samples=20, tol=1e-8)
        assert not r.passed


class TestRadius:
    def test_cone_radius(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        est = estimate_stable_radius(nf, 0.1, 0.5)
        assert est.estimate == pytest.approx(0.5)
        assert all(m > 1e-6 for m in est.margins.values())

    def test_single_radius_and_prefix_consistency(self):
        nf = NumericFamily(family("z1^2 + z2^2 + t*z1*z2"))
        full = estimate_stable_radius(nf, 0.1, 0.5, radii=[0.1, 0.2, 0.4])
        for r in full.radii:
            one = estimate_stable_radius(nf, 0.1, 0.5, radii=[r])
            assert one.estimate in (0.0, r)
            assert one.margins[r] == pytest.approx(full.margins[r])
        prefix = [r for r in full.radii if r <= full.estimate]
        if prefix:
            assert estimate_stable_radius(nf, 0.1, 0.5, radii=prefix).estimate == full.estimate

    def test_transversality_margin(self):
        nf = NumericFamily(family("z1^2 + z2^2"))
        y = np.array([1.0, 0.0], dtype=complex)
        assert transversality_margin(nf, 0, y) == pytest.approx(0.0, abs=1e-12)
        y = np.array([1.0, 1j], dtype=complex)
        assert transversality_margin(nf, 0, y) == pytest.approx(1.0)
