import io
import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import FIXTURES
from nad.cli import main
from nad.report import load_schema

SCHEMA = load_schema()
FAMILIES = ["zariski", "coords", "quadric", "umbrella", "degenerate", "cone"]


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def fam(name):
    return FIXTURES / f"{name}.fam"


@pytest.mark.parametrize(
    "name, code, verdict",
    [
        ("zariski", 1, "NOT_ADMISSIBLE"),
        ("coords", 0, "ADMISSIBLE"),
        ("quadric", 0, "ADMISSIBLE"),
        ("umbrella", 0, "ADMISSIBLE"),
        ("degenerate", 1, "NOT_ADMISSIBLE"),
        ("cone", 0, "ADMISSIBLE"),
    ],
)
def test_check_exit_codes_and_schema(tmp_path, name, code, verdict):
    path = tmp_path / "out.json"
    got, text, _ = run("check", fam(name), "--json", path)
    assert got == code
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["verdict"] == verdict
    # the text report is rendered from the same document
    assert f"overall: {verdict}" in text and text.rstrip().endswith(f"verdict: {verdict}")


@pytest.mark.parametrize("name", FAMILIES)
def test_strata_schema(tmp_path, name):
    path = tmp_path / "s.json"
    code, _, _ = run("strata", fam(name), "--at-t", "0", "--json", path)
    assert code == 0
    jsonschema.validate(json.loads(path.read_text()), SCHEMA)


def test_check_with_strata_section(tmp_path):
    path = tmp_path / "c.json"
    assert run("check", fam("coords"), "--strata", "--json", path)[0] == 0
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert len(doc["sections"]["strata"]) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["probe", fam("cone"), "--kind", "whitney", "--steps", "6"],
        ["probe", fam("quadric"), "--kind", "thom", "--steps", "6"],
        ["probe", fam("quadric"), "--kind", "fiber", "--grid", "2", "2", "--samples", "20"],
        ["probe", fam("cone"), "--kind", "radius", "--grid", "2", "2", "--samples", "5"],
    ],
)
def test_probe_schema_and_success(tmp_path, argv):
    path = tmp_path / "p.json"
    code, text, _ = run(*argv, "--json", path)
    assert code == 0
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["seed"] == 0 and doc["sections"]["probe"]["label"] == "EMPIRICAL"
    assert "EMPIRICAL" in text


def test_fiber_precondition():
    assert run("probe", fam("zariski"), "--kind", "fiber")[0] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["check", fam("coords"), "--bogus"],
        ["check", fam("empty")],
        ["check", FIXTURES / "missing.fam"],
        ["check", fam("coords"), "--subsets", "1,7"],
        ["check", fam("coords"), "--field", "prime:8"],
        ["probe", fam("cone"), "--kind", "whitney", "--pair", "nonsense"],
        ["strata", fam("coords"), "--at-t", "x"],
        [],
    ],
)
def test_input_errors_exit_3(argv):
    code, _, err = run(*argv)
    assert code == 3 and err.startswith("nad: error:")


def test_prime_field_caps_exit_code():
    code, text, _ = run("check", fam("coords"), "--field", "prime:32003")
    assert code == 2
    assert "PROBABILISTIC" in text


def test_subsets_option(tmp_path):
    path = tmp_path / "c.json"
    assert run("check", fam("coords"), "--subsets", "1+2", "--json", path)[0] == 0
    doc = json.loads(path.read_text())
    assert [s["subset"] for s in doc["sections"]["admissibility"]["subsets"]] == [[1, 2]]


def test_inconclusive_exit_code():
    assert run("check", fam("quadric"), "--max-basis", "1")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["check", fam("quadric")],
        ["strata", fam("zariski")],
        ["probe", fam("cone"), "--kind", "whitney", "--steps", "6", "--seed", "5"],
    ],
)
def test_determinism(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(*argv, "--json", a)
    run(*argv, "--json", b)
    assert a.read_bytes() == b.read_bytes()


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nad.cli", "check", str(fam("zariski"))], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "offending vertex (2,0) coefficient t^2" in proc.stdout
