"""Newton-admissibility of a family: boundary constancy plus non-degeneracy and
uniform local tameness for every subset of factors, generically in t and at t = 0."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .certify import (
    DEGENERATE,
    GENERIC,
    GLOBAL,
    INCONCLUSIVE,
    BoundaryResult,
    Verdict,
    check_boundary_constancy,
    check_local_tameness,
    check_nondegeneracy,
)
from .groebner import DEFAULT_LIMITS, Limits
from .poly import FamilyError, PoleError, PolyFamily
from .stratify import StratificationReport, enumerate_strata

ADMISSIBLE = "ADMISSIBLE"
ADMISSIBLE_GENERIC = "ADMISSIBLE_GENERIC"
NOT_ADMISSIBLE = "NOT_ADMISSIBLE"
INCONCLUSIVE_OVERALL = "INCONCLUSIVE"

MAX_FACTORS = 6

CONCLUSIONS = (
    "the canonical toric stratification is Whitney (b)-regular for all small t",
    "the stratification satisfies the Thom a_f condition for all small t",
    "the family has a uniform stable radius for its Milnor fibrations",
    "the Milnor fibrations of f_t at the origin are isomorphic for all small t",
)
CONCLUSION_TAG = "THEOREM-IMPLIED (not independently verified)"


@dataclass
class SubsetResult:
    subset: tuple[int, ...]
    nondegeneracy: Verdict
    tameness: Verdict
    nondegeneracy_t0: Verdict
    tameness_t0: Verdict

    def verdicts(self) -> list[tuple[str, Verdict]]:
        return [
            ("nondegeneracy", self.nondegeneracy),
            ("tameness", self.tameness),
            ("nondegeneracy@t=0", self.nondegeneracy_t0),
            ("tameness@t=0", self.tameness_t0),
        ]


@dataclass
class AdmissibilityReport:
    boundary: list[BoundaryResult]
    subsets: list[SubsetResult]
    overall: str
    reasons: list[str] = field(default_factory=list)
    exceptional_loci: list[tuple[tuple[int, ...], str, str]] = field(default_factory=list)
    probabilistic: bool = False

    @property
    def failing_subsets(self) -> list[tuple[int, ...]]:
        return [s.subset for s in self.subsets if any(v.tier in (DEGENERATE, INCONCLUSIVE) for _, v in s.verdicts())]


def all_subsets(k0: int) -> list[tuple[int, ...]]:
    return [c for r in range(1, k0 + 1) for c in itertools.combinations(range(1, k0 + 1), r)]


def _acceptable(v: Verdict) -> bool:
    return v.tier == GLOBAL or (v.tier == GENERIC and v.origin_clear)


def _pole_verdict(exc: Exception) -> Verdict:
    return Verdict(INCONCLUSIVE, note=f"family is not defined at t = 0: {exc}")


def _collapse_verdict(exc: Exception) -> Verdict:
    return Verdict(INCONCLUSIVE, note=f"family degenerates at t = 0: {exc}")


def _check_subset(family: PolyFamily, subset: tuple[int, ...], limits: Limits, modulus: int | None) -> SubsetResult:
    nd = check_nondegeneracy(family, subset, True, limits=limits, modulus=modulus)
    tm = check_local_tameness(family, subset, True, limits=limits, modulus=modulus)
    if family.param is None:
        return SubsetResult(subset, nd, tm, nd, tm)
    try:
        nd0 = check_nondegeneracy(family, subset, False, 0, limits=limits, modulus=modulus)
        tm0 = check_local_tameness(family, subset, False, 0, limits=limits, modulus=modulus)
    except PoleError as exc:
        nd0 = tm0 = _pole_verdict(exc)
    except FamilyError as exc:
        nd0 = tm0 = _collapse_verdict(exc)
    return SubsetResult(subset, nd, tm, nd0, tm0)


def check_admissible(
    family: PolyFamily,
    subsets: Sequence[Sequence[int]] | None = None,
    limits: Limits = DEFAULT_LIMITS,
    modulus: int | None = None,
    max_factors: int = MAX_FACTORS,
) -> AdmissibilityReport:
    """Boundary constancy per factor, then every requested factor subset (all by default)."""
    if family.k0 > max_factors:
        raise ValueError(f"{family.k0} factors exceed the cap of {max_factors}")
    boundary = [check_boundary_constancy(f, 0, k) for k, f in enumerate(family.factors, start=1)]
    if subsets is None:
        chosen = all_subsets(family.k0)
    else:
        chosen = sorted({tuple(sorted(set(s))) for s in subsets}, key=lambda s: (len(s), s))
        for s in chosen:
            if not s or not all(1 <= k <= family.k0 for k in s):
                raise ValueError(f"invalid factor subset {s}")
    results = [_check_subset(family, s, limits, modulus) for s in chosen]

    reasons = []
    for b in boundary:
        for vertex, coef in b.offending:
            reasons.append(f"factor {b.factor}: vertex {vertex} has coefficient {coef}, which vanishes or has a pole at t = 0")
    degenerate = inconclusive = generic_open = False
    loci = []
    for r in results:
        for kind, v in r.verdicts():
            if v.tier == DEGENERATE:
                degenerate = True
                where = v.failing.label() if v.failing else ""
                reasons.append(f"subset {list(r.subset)} {kind}: Degenerate at {where}")
            elif v.tier == INCONCLUSIVE:
                inconclusive = True
                reasons.append(f"subset {list(r.subset)} {kind}: Inconclusive ({v.note})")
            elif v.tier == GENERIC:
                loci.append((r.subset, kind, str(v.exceptional_locus)))
                if not v.origin_clear:
                    generic_open = True
                    reasons.append(f"subset {list(r.subset)} {kind}: exceptional locus {v.exceptional_locus} meets the origin")
    if not all(b.passed for b in boundary) or degenerate:
        overall = NOT_ADMISSIBLE
    elif inconclusive:
        overall = INCONCLUSIVE_OVERALL
    elif generic_open:
        overall = ADMISSIBLE_GENERIC
    else:
        overall = ADMISSIBLE
    if modulus is not None and overall == ADMISSIBLE:
        overall = ADMISSIBLE_GENERIC
        reasons.append(f"computed modulo {modulus}: PROBABILISTIC, not a certificate")
    return AdmissibilityReport(boundary, results, overall, reasons, loci, modulus is not None)


@dataclass
class FullReport:
    admissibility: AdmissibilityReport
    strata: StratificationReport
    conclusions: list[str]


def conclusions_for(report: AdmissibilityReport) -> list[str]:
    if report.overall == ADMISSIBLE:
        return [f"{CONCLUSION_TAG}: {line}" for line in CONCLUSIONS]
    if report.overall == INCONCLUSIVE_OVERALL:
        return ["conclusions withheld; unresolved subsets: " + ", ".join(str(list(s)) for s in report.failing_subsets)]
    if report.overall == ADMISSIBLE_GENERIC:
        return ["conclusions withheld; exceptional loci require manual inspection"]
    return []


def full_report(family: PolyFamily, limits: Limits = DEFAULT_LIMITS, modulus: int | None = None) -> FullReport:
    adm = check_admissible(family, limits=limits, modulus=modulus)
    strata = enumerate_strata(family, "generic", limits)
    return FullReport(adm, strata, conclusions_for(adm))
