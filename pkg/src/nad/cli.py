"""Command line entry point: ``nad check|strata|probe <family file> ...``.

Exit codes: 0 success, 1 not admissible / degenerate / probe failure,
2 inconclusive or generic-only certificates, 3 input error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from .admissibility import (
    ADMISSIBLE,
    ADMISSIBLE_GENERIC,
    INCONCLUSIVE_OVERALL,
    NOT_ADMISSIBLE,
    check_admissible,
)
from .family import FamilyFileError, load_family
from .groebner import Limits
from .probe import (
    NumericFamily,
    ProbeError,
    default_arcs,
    estimate_stable_radius,
    parse_arc_pair,
    probe_thom_af,
    probe_uniform_nonsingular,
    probe_whitney_b,
)
from .report import admissibility_doc, document, probe_doc, render_text, strata_doc, to_json
from .stratify import enumerate_strata

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3

OVERALL_EXIT = {
    ADMISSIBLE: EXIT_OK,
    NOT_ADMISSIBLE: EXIT_FAIL,
    INCONCLUSIVE_OVERALL: EXIT_INCONCLUSIVE,
    ADMISSIBLE_GENERIC: EXIT_INCONCLUSIVE,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field(text: str) -> int | None:
    if text == "rational":
        return None
    if text.startswith("prime:"):
        try:
            p = int(text[6:])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad prime {text[6:]!r}") from None
        if p < 3 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
        return p
    raise argparse.ArgumentTypeError("expected 'rational' or 'prime:<p>'")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _indices(text: str) -> frozenset[int]:
    text = text.strip().strip("{}")
    if text in ("", "-"):
        return frozenset()
    try:
        return frozenset(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None


def _pair(text: str):
    """``I/K:J/L`` with comma-separated 1-based indices; an empty set is '' or '-'."""
    try:
        small, big = text.split(":")
        I, K = small.split("/")
        J, L = big.split("/")
    except ValueError:
        raise argparse.ArgumentTypeError("pair must look like 'I/K:J/L', e.g. '-/1:1,2/1'") from None
    return (_indices(I), _indices(K)), (_indices(J), _indices(L))


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(x.strip().replace(" ", "")) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad complex list {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nad", description="Newton-admissibility checks for families of polynomial factors.")
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    check = sub.add_parser("check", help="decide Newton-admissibility")
    check.add_argument("file")
    check.add_argument("--subsets", default="all", help="'all' or e.g. '1,2,1+2' (factor subsets, '+' joins)")
    check.add_argument("--json", dest="json_path")
    check.add_argument("--field", type=_field, default=None, help="rational (default) or prime:<p>")
    check.add_argument("--max-degree", type=int, default=60)
    check.add_argument("--max-basis", type=int, default=2000)
    check.add_argument("--strata", action="store_true", help="also enumerate the generic-t stratification")

    strata = sub.add_parser("strata", help="enumerate the canonical toric stratification")
    strata.add_argument("file")
    mode = strata.add_mutually_exclusive_group()
    mode.add_argument("--at-t", type=_rational, default=None)
    mode.add_argument("--generic", action="store_true")
    strata.add_argument("--json", dest="json_path")
    strata.add_argument("--max-degree", type=int, default=60)
    strata.add_argument("--max-basis", type=int, default=2000)

    probe = sub.add_parser("probe", help="floating-point probes (EMPIRICAL)")
    probe.add_argument("file")
    probe.add_argument("--kind", required=True, choices=["whitney", "thom", "fiber", "radius"])
    probe.add_argument("--pair", type=_pair, default=None, help="'I/K:J/L' small and big strata")
    probe.add_argument("--arc", default=None, help="'t;z1;..;zn | t;z1;..;zn' series in s (big arc | small arc)")
    probe.add_argument("--point", type=_complex_list, default=None, help="thom: point q as 't,z1,..,zn'")
    probe.add_argument("--t0", type=float, default=0.0, help="base value of t for default arcs and points")
    probe.add_argument("--steps", type=int, default=16)
    probe.add_argument("--s-max", type=float, default=1e-1)
    probe.add_argument("--s-min", type=float, default=1e-5)
    probe.add_argument("--tol", type=float, default=None)
    probe.add_argument("--seed", type=int, default=0)
    probe.add_argument("--tau", type=float, default=0.1)
    probe.add_argument("--radius", type=float, default=0.5)
    probe.add_argument("--radii", type=_float_list, default=None)
    probe.add_argument("--delta", type=float, default=None)
    probe.add_argument("--grid", type=int, nargs=2, default=None, metavar=("NT", "NETA"))
    probe.add_argument("--samples", type=int, default=None)
    probe.add_argument("--force", action="store_true", help="run fiber/radius probes without an ADMISSIBLE verdict")
    probe.add_argument("--json", dest="json_path")
    return parser


def _parse_subsets(text: str, k0: int):
    if text == "all":
        return None
    out = []
    for chunk in text.split(","):
        try:
            subset = tuple(int(x) for x in chunk.split("+"))
        except ValueError:
            raise UsageError(f"bad subset {chunk!r}") from None
        if not subset or not all(1 <= k <= k0 for k in subset):
            raise UsageError(f"subset {chunk!r} out of range 1..{k0}")
        out.append(subset)
    return out


def _emit(doc: dict, json_path: str | None, out) -> None:
    out.write(render_text(doc))
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(to_json(doc))


def _run_check(args, ff, data, out) -> int:
    family = ff.family
    limits = Limits(max_basis=args.max_basis, max_degree=args.max_degree)
    subsets = _parse_subsets(args.subsets, family.k0)
    rep = check_admissible(family, subsets, limits=limits, modulus=args.field)
    sections = {"admissibility": admissibility_doc(rep)}
    code = OVERALL_EXIT[rep.overall]
    if args.strata:
        st = enumerate_strata(family, "generic", limits)
        sections["strata"] = strata_doc(st)
        if st.inconclusive and code == EXIT_OK:
            code = EXIT_INCONCLUSIVE
    if args.field is not None and code == EXIT_OK:
        code = EXIT_INCONCLUSIVE
    _emit(document("check", data, rep.overall, sections), args.json_path, out)
    return code


def _run_strata(args, ff, data, out) -> int:
    limits = Limits(max_basis=args.max_basis, max_degree=args.max_degree)
    mode = args.at_t if args.at_t is not None else "generic"
    st = enumerate_strata(ff.family, mode, limits)
    verdict = "INCONCLUSIVE" if st.inconclusive else f"{st.count} strata"
    _emit(document("strata", data, verdict, {"strata": strata_doc(st)}), args.json_path, out)
    return EXIT_INCONCLUSIVE if st.inconclusive else EXIT_OK


def _run_probe(args, ff, data, out) -> int:
    family = ff.family
    nf = NumericFamily(family)
    n, k0 = family.n, family.k0
    all_idx = frozenset(range(1, n + 1))
    if args.kind in ("fiber", "radius") and not args.force:
        rep = check_admissible(family)
        if rep.overall != ADMISSIBLE:
            raise UsageError(f"precondition: family is {rep.overall}; pass --force to probe anyway")
    if args.steps < 2 or not 0 < args.s_min < args.s_max:
        raise UsageError("need --steps >= 2 and 0 < --s-min < --s-max")
    s_grid = list(np.geomspace(args.s_max, args.s_min, args.steps))
    if args.kind == "whitney":
        small, big = args.pair or ((frozenset(), frozenset(range(1, k0 + 1))), (all_idx, frozenset({1})))
        if args.arc:
            big_arc, small_arc = parse_arc_pair(args.arc, n)
            if small_arc is None:
                _, small_arc = default_arcs(nf, small, big, args.t0, args.seed)
        else:
            big_arc, small_arc = default_arcs(nf, small, big, args.t0, args.seed)
        result = probe_whitney_b(nf, small, big, big_arc, small_arc, s_grid, args.tol or 1e-3)
        ok = result.passed
    elif args.kind == "thom":
        stratum = args.pair[0] if args.pair else (frozenset(), frozenset(range(1, k0 + 1)))
        q = np.array(args.point if args.point else [args.t0] + [0] * n, dtype=complex)
        if len(q) != n + 1:
            raise UsageError(f"--point needs {n + 1} coordinates (t then z)")
        result = probe_thom_af(nf, stratum, q, None, s_grid, args.tol or 1e-3, args.seed)
        ok = result.passed
    elif args.kind == "fiber":
        nt, ne = args.grid or (10, 10)
        result = probe_uniform_nonsingular(
            nf, args.tau, args.radius, args.delta or 0.01, nt, ne, args.samples or 200, args.tol or 1e-8, args.seed
        )
        ok = result.passed
    else:
        nt, ne = args.grid or (5, 4)
        result = estimate_stable_radius(
            nf, args.tau, args.radius, args.radii, nt, ne, args.delta or 1e-8, args.samples or 20, args.tol or 1e-6, args.seed
        )
        ok = result.estimate > 0
    doc_p = probe_doc(result)
    verdict = doc_p["trend"] if args.kind != "radius" else ("estimate" if ok else "no-stable-radius")
    _emit(document("probe", data, verdict, {"probe": doc_p}, seed=args.seed), args.json_path, out)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version:
            from . import __version__

            out.write(f"nad {__version__}\n")
            return EXIT_OK
        if not args.command:
            raise UsageError("a command is required: check, strata or probe")
        ff, data = load_family(args.file)
        if args.command == "check":
            return _run_check(args, ff, data, out)
        if args.command == "strata":
            return _run_strata(args, ff, data, out)
        return _run_probe(args, ff, data, out)
    except (UsageError, FamilyFileError, ProbeError, OSError, ValueError) as exc:
        err.write(f"nad: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
