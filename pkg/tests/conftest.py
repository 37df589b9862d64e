from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from nad.poly import ParametricPolynomial, PolyFamily, Ring, parse_polynomial

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("nad", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("nad")


def ring(n, params=("t",)):
    return Ring(tuple(f"z{i}" for i in range(1, n + 1)), params)


def poly(text, n=2, params=("t",)):
    return parse_polynomial(text, [f"z{i}" for i in range(1, n + 1)], params)


def family(*texts, n=2, params=("t",)):
    return PolyFamily(tuple(poly(s, n, params) for s in texts))


@st.composite
def polynomials(draw, n=None, params=("t",), max_terms=8, max_deg=4, height=10, min_terms=0, zero_constant=False):
    """Random polynomial in z1..zn (and params) with small integer coefficients."""
    n = n or draw(st.integers(1, 4))
    R = ring(n, params)
    width = n + len(params)
    k = draw(st.integers(min_terms, max_terms))
    terms = {}
    for _ in range(k):
        m = tuple(draw(st.integers(0, max_deg)) for _ in range(width))
        if zero_constant and not any(m[:n]):
            continue
        c = draw(st.integers(-height, height))
        if c:
            terms[m] = Fraction(c)
    return ParametricPolynomial(R, terms)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    import sys as _sys

    mod = _sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
