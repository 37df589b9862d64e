"""The ten acceptance criteria, one test each.

Each test records PASS/FAIL with its runtime; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script.
"""

import functools
import io
import itertools
import json
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from face_helpers import euler, multiplicative, random_poly, random_weight, restriction, restriction_case  # noqa: E402
from gb_helpers import modular_check, random_ideal, self_certified  # noqa: E402
from nad.certify import GLOBAL, CertifyTask, check_face_nondegenerate, check_local_tameness, check_nondegeneracy  # noqa: E402
from nad.cli import main  # noqa: E402
from nad.family import load_family  # noqa: E402
from nad.groebner import ResourceLimitExceeded, saturate  # noqa: E402
from nad.poly import ParametricPolynomial  # noqa: E402
from nad.polyhedra import common_cones  # noqa: E402
from nad.probe import NumericFamily, default_arcs, probe_uniform_nonsingular, probe_whitney_b  # noqa: E402
from nad.stratify import classify_point, enumerate_strata  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, tuple[str, float, str]] = {}


def criterion(number: int, title: str, budget: float | None = None):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            status, detail = "FAIL", ""
            try:
                detail = fn() or ""
                elapsed = time.perf_counter() - start
                if budget is not None:
                    assert elapsed < budget, f"runtime {elapsed:.2f}s over the {budget:g}s budget"
                status = "PASS"
            except Exception as exc:
                detail = f"{type(exc).__name__}: {exc}"
                raise
            finally:
                elapsed = time.perf_counter() - start
                RESULTS[number] = (status, elapsed, f"{title}" + (f" - {detail}" if detail else ""))
                print(f"ACCEPTANCE {number:2d} {status} ({elapsed:.2f}s) {RESULTS[number][2]}")

        return run

    return wrap


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue()


def cli_json(*argv):
    with tempfile.TemporaryDirectory() as d:
        path = Path(d) / "r.json"
        code, _ = cli(*argv, "--json", path)
        return code, path.read_bytes()


@criterion(1, "Zariski family is NOT_ADMISSIBLE at vertex (2,0) with coefficient t^2", budget=1.0)
def test_c01_zariski():
    code, raw = cli_json("check", FIXTURES / "zariski.fam")
    doc = json.loads(raw)
    adm = doc["sections"]["admissibility"]
    assert code == 1 and adm["overall"] == "NOT_ADMISSIBLE"
    offending = [(o["vertex"], o["coefficient"]) for b in adm["boundary"] for o in b["offending"]]
    assert offending == [([2, 0], "t^2")]


@criterion(2, "coordinate product: ADMISSIBLE, 3 strata, F_5 partition agrees", budget=5.0)
def test_c02_coordinates():
    code, _ = cli("check", FIXTURES / "coords.fam")
    assert code == 0
    code, raw = cli_json("strata", FIXTURES / "coords.fam")
    strata = {(tuple(s["I"]), tuple(s["K"])): s["dim"] for s in json.loads(raw)["sections"]["strata"]}
    assert strata == {((), (1, 2)): 1, ((1,), (2,)): 2, ((2,), (1,)): 2}
    fam = load_family(FIXTURES / "coords.fam")[0].family
    p = 5
    counts = {}
    for t, z1, z2 in itertools.product(range(p), repeat=3):
        # definition: K = vanishing factors, I = non-zero coordinates
        K = tuple(k for k, v in ((1, z1), (2, z2)) if v % p == 0)
        if not K:
            continue
        I = tuple(i for i, v in ((1, z1), (2, z2)) if v % p)
        got = classify_point(fam, t, [z1, z2], modulus=p)
        assert got == (frozenset(I), frozenset(K))
        counts[(I, K)] = counts.get((I, K), 0) + 1
    assert set(counts) == set(strata)
    assert counts == {((), (1, 2)): 5, ((1,), (2,)): 20, ((2,), (1,)): 20}
    return "125 points, 45 on V(f)"


@criterion(3, "quadric family: ADMISSIBLE with exceptional locus (t^2 - 4), t = 0 outside", budget=10.0)
def test_c03_quadric():
    code, raw = cli_json("check", FIXTURES / "quadric.fam")
    adm = json.loads(raw)["sections"]["admissibility"]
    assert code == 0 and adm["overall"] == "ADMISSIBLE"
    loci = {e["ideal"] for e in adm["exceptional_loci"]}
    assert loci == {"(t^2 - 4)"}
    fam = load_family(FIXTURES / "quadric.fam")[0].family
    v = check_nondegeneracy(fam, (1,))
    assert all(g.evaluate({"t": Fraction(0)}) != 0 for g in v.exceptional_locus.generators)
    assert v.origin_clear


@criterion(4, "Whitney umbrella: non-degeneracy and local tameness certified globally", budget=30.0)
def test_c04_umbrella():
    fam = load_family(FIXTURES / "umbrella.fam")[0].family
    nd = check_nondegeneracy(fam, (1,))
    assert nd.tier == GLOBAL and nd.log and all(e.tier == GLOBAL for e in nd.log)
    tm = check_local_tameness(fam, (1,))
    assert tm.tier == GLOBAL
    assert {frozenset(e.task.I) for e in tm.log} == {frozenset({2}), frozenset({3})}
    # {2,3} is not a vanishing subspace of z1^2 - z2^2*z3; its cones are checked directly
    f = fam.factors[0]
    task = CertifyTask((1,), frozenset({2, 3}), True, ("u2", "u3"))
    tiers = [check_face_nondegenerate([f], c, task).tier for c in common_cones([f], {2, 3})]
    assert tiers == [GLOBAL]
    return f"{len(nd.log)} compact cones, {len(tm.log) + len(tiers)} tameness cones"


@criterion(5, "degenerate fixture: Degenerate at w=(1,1,1), witness has z1 + z2, exit 1")
def test_c05_degenerate():
    code, raw = cli_json("check", FIXTURES / "degenerate.fam")
    assert code == 1
    sub = json.loads(raw)["sections"]["admissibility"]["subsets"][0]["nondegeneracy"]
    assert sub["tier"] == "Degenerate"
    assert sub["at"] == "I={} w=(1,1,1)"
    assert "z1 + z2" in sub["witness"]


@criterion(6, "Groebner self-certificates on 100 seeded ideals, saturation, modular agreement")
def test_c06_groebner():
    rng = random.Random(2024)
    ideals = [random_ideal(rng) for _ in range(100)]
    assert all(self_certified(I) for I in ideals)
    saturated = 0
    for I in ideals:
        f = ParametricPolynomial.symbol(I.ring, I.ring.variables[0])
        try:
            once = saturate(I, f)
            twice = saturate(once, f)
            assert twice.basis().strings() == once.basis().strings()
            saturated += 1
        except ResourceLimitExceeded:
            pass
    assert saturated >= 95
    agree = sum(modular_check(I, rng) for I in ideals[:50])
    assert agree >= 49
    return f"saturation checked on {saturated}, modular agreement {agree}/50"


@criterion(7, "face algebra: 1000 multiplicativity + Euler cases, 500 restriction cases")
def test_c07_face_algebra():
    rng = random.Random(7)
    for _ in range(1000):
        f, g = random_poly(rng), random_poly(rng)
        w = random_weight(rng)
        assert multiplicative(f, g, w)
        assert euler(f, w) and euler(g, w) and euler(f * g, w)
    for _ in range(500):
        f, w = restriction_case(rng)
        assert restriction(f, w) is True


@criterion(8, "Whitney probe: cone distance < 1e-3 at s = 1e-4, Zariski smooth part converging", budget=60.0)
def test_c08_whitney():
    grid = list(np.geomspace(1e-1, 1e-4, 13))
    small, big = (frozenset(), frozenset({1})), (frozenset({1, 2}), frozenset({1}))
    out = []
    for name in ("cone", "zariski"):
        start = time.perf_counter()
        nf = NumericFamily(load_family(FIXTURES / f"{name}.fam")[0].family)
        big_arc, small_arc = default_arcs(nf, small, big)
        r = probe_whitney_b(nf, small, big, big_arc, small_arc, grid)
        assert time.perf_counter() - start < 30
        assert r.trend == "converging"
        if name == "cone":
            at = [x for x in r.samples if abs(x.s - 1e-4) < 1e-12][0]
            assert at.distance < 1e-3 and r.exponent > 0
        out.append(f"{name} exponent {r.exponent:.3g}")
    return ", ".join(out)


@criterion(9, "fiber probe on the quadric: 10x10x200 samples, none bad", budget=60.0)
def test_c09_fiber():
    nf = NumericFamily(load_family(FIXTURES / "quadric.fam")[0].family)
    r = probe_uniform_nonsingular(nf, 0.1, 0.5, 0.01, 10, 10, 200)
    assert r.total_samples == 20000 and r.bad_samples == 0 and r.passed
    return f"worst gradient norm {r.worst_margin:.3g}"


@criterion(10, "determinism: byte-identical JSON on reruns of every command")
def test_c10_determinism():
    runs = [
        ["check", FIXTURES / "quadric.fam"],
        ["check", FIXTURES / "umbrella.fam", "--strata"],
        ["strata", FIXTURES / "zariski.fam"],
        ["strata", FIXTURES / "coords.fam", "--at-t", "1/2"],
        ["probe", FIXTURES / "cone.fam", "--kind", "whitney", "--seed", "3"],
        ["probe", FIXTURES / "quadric.fam", "--kind", "thom", "--seed", "3"],
        ["probe", FIXTURES / "quadric.fam", "--kind", "fiber", "--grid", "3", "3", "--samples", "30", "--seed", "3"],
        ["probe", FIXTURES / "cone.fam", "--kind", "radius", "--seed", "3"],
    ]
    for argv in runs:
        a, b = cli_json(*argv), cli_json(*argv)
        assert a == b, f"non-deterministic output for {argv[0]} {argv[-1]}"
    return f"{len(runs)} commands"


def summary_lines() -> list[str]:
    lines = []
    for k in range(1, 11):
        if k in RESULTS:
            status, elapsed, title = RESULTS[k]
            lines.append(f"ACCEPTANCE {k:2d} {status} ({elapsed:.2f}s) {title}")
    return lines


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_c")]
    failed = 0
    for t in tests:
        try:
            t()
        except Exception:
            failed += 1
    print(f"{len(tests) - failed}/{len(tests)} criteria passed")
    sys.exit(1 if failed else 0)
