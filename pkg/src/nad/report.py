"""Report documents (plain dicts) and their text rendering.

Text output is rendered from the same document that is written as JSON, so the
two can never disagree on a verdict.
"""

from __future__ import annotations

import hashlib
import json
import math
from importlib import resources

from . import __version__
from .admissibility import AdmissibilityReport, conclusions_for
from .certify import Verdict
from .probe import FiberResult, ProbeResult, RadiusEstimate
from .stratify import StratificationReport


def _set(s) -> list[int]:
    return sorted(s)


def _num(x):
    if x is None:
        return None
    if isinstance(x, complex):
        return [_num(x.real), _num(x.imag)]
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


def verdict_doc(v: Verdict) -> dict:
    doc = {"tier": v.tier}
    if v.exceptional_locus is not None:
        doc["exceptional_locus"] = [str(g) for g in v.exceptional_locus.generators]
        doc["origin_clear"] = v.origin_clear
    if v.witness is not None:
        doc["witness"] = [str(g) for g in v.witness.generators]
    failing = v.failing
    if failing is not None:
        doc["at"] = failing.label()
    if v.probabilistic:
        doc["probabilistic"] = True
    if v.note:
        doc["note"] = v.note
    doc["cones"] = [{"cone": e.label(), "tier": e.tier} for e in v.log]
    return doc


def admissibility_doc(rep: AdmissibilityReport) -> dict:
    boundary = []
    for b in rep.boundary:
        boundary.append(
            {
                "factor": b.factor,
                "pass": b.passed,
                "vertices": [list(v) for v in b.vertices],
                "offending": [{"vertex": list(v), "coefficient": str(c)} for v, c in b.offending],
            }
        )
    subsets = []
    for r in rep.subsets:
        subsets.append(
            {
                "subset": list(r.subset),
                "nondegeneracy": verdict_doc(r.nondegeneracy),
                "tameness": verdict_doc(r.tameness),
                "nondegeneracy_t0": verdict_doc(r.nondegeneracy_t0),
                "tameness_t0": verdict_doc(r.tameness_t0),
            }
        )
    return {
        "overall": rep.overall,
        "boundary": boundary,
        "subsets": subsets,
        "reasons": list(rep.reasons),
        "exceptional_loci": [{"subset": list(s), "check": k, "ideal": i} for s, k, i in rep.exceptional_loci],
        "conclusions": conclusions_for(rep),
        "probabilistic": rep.probabilistic,
    }


def strata_doc(rep: StratificationReport) -> list[dict]:
    out = []
    for s in rep.strata:
        doc = {
            "I": _set(s.I),
            "K": _set(s.K),
            "dim": s.dim,
            "nonempty": s.nonempty,
            "certificate": list(s.certificate),
            "forced": _set(s.forced),
            "t_axis": s.is_t_axis,
        }
        if s.slice_dim is not None:
            doc["slice_dim"] = s.slice_dim
        if s.note:
            doc["note"] = s.note
        out.append(doc)
    return out


def probe_doc(result) -> dict:
    if isinstance(result, ProbeResult):
        return {
            "kind": result.kind,
            "label": result.label,
            "samples": [
                {"s": _num(x.s), "distance": _num(x.distance), "residual": _num(x.residual), "flag": x.flag}
                for x in result.samples
            ],
            "trend": result.trend,
            "exponent": _num(result.exponent),
            "final_distance": _num(result.final_distance),
            "notes": list(result.notes),
        }
    if isinstance(result, FiberResult):
        return {
            "kind": "fiber",
            "label": result.label,
            "samples": [
                {
                    "t": _num(c.t),
                    "eta": _num(c.eta),
                    "points": c.samples,
                    "bad": c.bad,
                    "worst_margin": _num(c.worst_margin),
                }
                for c in result.cells
            ],
            "trend": "pass" if result.passed else "fail",
            "final_distance": _num(result.worst_margin),
            "bad_samples": result.bad_samples,
            "total_samples": result.total_samples,
            "tolerance": result.tolerance,
            "notes": list(result.notes),
        }
    if isinstance(result, RadiusEstimate):
        return {
            "kind": "radius",
            "label": result.label,
            "samples": [{"radius": _num(r), "worst_margin": _num(result.margins[r])} for r in result.radii],
            "trend": "estimate",
            "final_distance": _num(result.estimate),
            "estimate": _num(result.estimate),
            "tolerance": result.tolerance,
            "notes": list(result.notes),
        }
    raise TypeError(f"unknown probe result {type(result).__name__}")


def document(command: str, data: bytes, verdict: str, sections: dict, seed: int | None = None) -> dict:
    doc = {
        "version": __version__,
        "input_sha256": hashlib.sha256(data).hexdigest(),
        "command": command,
        "verdict": verdict,
        "sections": sections,
    }
    if seed is not None:
        doc["seed"] = seed
    return doc


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("nad").joinpath("report_schema.json").read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# text


def _fmt_set(xs) -> str:
    return "{" + ",".join(str(x) for x in xs) + "}"


def render_text(doc: dict) -> str:
    out = [f"nad {doc['version']}  {doc['command']}  input sha256 {doc['input_sha256'][:16]}"]
    if "seed" in doc:
        out.append(f"seed {doc['seed']}")
    secs = doc["sections"]
    if "admissibility" in secs:
        a = secs["admissibility"]
        out.append("")
        out.append("== admissibility (CERTIFIED" + (", PROBABILISTIC" if a["probabilistic"] else "") + ")")
        for b in a["boundary"]:
            status = "PASS" if b["pass"] else "FAIL"
            out.append(f"boundary factor {b['factor']}: {status}")
            for o in b["offending"]:
                out.append(f"  offending vertex ({','.join(map(str, o['vertex']))}) coefficient {o['coefficient']}")
        for s in a["subsets"]:
            out.append(f"subset {_fmt_set(s['subset'])}")
            for key in ("nondegeneracy", "tameness", "nondegeneracy_t0", "tameness_t0"):
                v = s[key]
                line = f"  {key:<17} {v['tier']}"
                if "exceptional_locus" in v:
                    clear = "origin clear" if v["origin_clear"] else "meets origin"
                    line += f"  locus ({', '.join(v['exceptional_locus'])}) [{clear}]"
                if v["tier"] == "Degenerate" and "witness" in v:
                    line += f"  witness ({', '.join(v['witness'])})"
                if "at" in v:
                    line += f"  at {v['at']}"
                if "note" in v and v["tier"] == "Inconclusive":
                    line += f"  ({v['note']})"
                out.append(line)
        for r in a["reasons"]:
            out.append(f"reason: {r}")
        out.append(f"overall: {a['overall']}")
        for c in a["conclusions"]:
            out.append(f"  {c}")
    if "strata" in secs:
        out.append("")
        out.append(f"== strata ({len(secs['strata'])})")
        for s in secs["strata"]:
            label = f"S^{_fmt_set(s['I'])}({_fmt_set(s['K'])})"
            if s["nonempty"] is None:
                out.append(f"{label}  Inconclusive ({s.get('note', '')})")
                continue
            extra = f" slice_dim {s['slice_dim']}" if "slice_dim" in s else ""
            tag = "  [t-axis]" if s["t_axis"] else ""
            out.append(f"{label}  dim {s['dim']}{extra}  certificate ({', '.join(s['certificate'])}){tag}")
    if "probe" in secs:
        p = secs["probe"]
        out.append("")
        out.append(f"== probe {p['kind']} ({p['label']})")
        if p["kind"] in ("whitney", "thom"):
            for x in p["samples"]:
                d = "-" if x["distance"] is None else f"{x['distance']:.3e}"
                out.append(f"  s={x['s']:.3e}  distance {d}  {x['flag']}")
            out.append(f"trend: {p['trend']}  exponent {p['exponent']}  final distance {p['final_distance']}")
        elif p["kind"] == "fiber":
            out.append(f"samples {p['total_samples']}  bad {p['bad_samples']}  worst margin {p['final_distance']}  tolerance {p['tolerance']}")
            out.append(f"trend: {p['trend']}")
        else:
            for x in p["samples"]:
                out.append(f"  radius {x['radius']}  worst margin {x['worst_margin']}")
            out.append(f"estimate: {p['estimate']}")
        for note in p["notes"]:
            out.append(f"note: {note}")
    out.append("")
    out.append(f"verdict: {doc['verdict']}")
    return "\n".join(out) + "\n"
