import json
import os
import pathlib
import subprocess

import jsonschema
import pytest

import anosovkit as ak

SCHEMAS = pathlib.Path(os.environ.get("ANOSOVKIT_SCHEMA_DIR", pathlib.Path(__file__).parents[2] / "docs" / "schemas"))
CLI = os.environ.get("ANOSOVKIT_CLI")


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema).validate(doc)


def test_polynomial_roundtrip():
    p = ak.parse_poly("x^3 - x - 1")
    assert p.coeffs == [-1, -1, 0, 1]
    assert p.degree == 3
    assert str(p) == "x^3 - x - 1"
    assert ak.IntPolynomial([-1, -1, 0, 1]) == p
    assert ak.power_transform(p, 2).coeffs == [-1, 1, -2, 1]
    assert ak.reverse(p).coeffs == [-1, 0, 1, 1]
    assert ak.discriminant(p) == "-23"


def test_parse_error():
    with pytest.raises(ValueError):
        ak.parse_poly("x^2 + y")


def test_certify_profiles():
    prof = ak.certify(ak.parse_poly("x^2 - 3x + 1"))
    validate(prof, "profile")
    assert prof["accepted"] and prof["q"] == 1 and prof["certification"] == "ExactQ1"
    assert abs(prof["lambda"]["value"] - 2.618033988749895) < 1e-14
    rej = ak.certify(ak.parse_poly("x^4 - 2x^3 + x - 1"))
    assert not rej["accepted"] and rej["reason"] == "WrongConstantTerm"
    forced = ak.certify(ak.parse_poly("x^3 - x - 1"), force_interval=True)
    assert forced["certification"] == "IntervalCertified"


def test_replay_and_factor():
    rep = ak.replay(ak.parse_poly("x^3 - x - 1"))
    validate(rep, "replay")
    assert rep["identity_holds"] and rep["contradiction"] is None
    irreducible, factors = ak.factor(ak.parse_poly("x^4 - 1"))
    assert not irreducible and len(factors) == 3


def test_search_matches_exact_characterization():
    rep = ak.search(3, 3)
    validate(rep, "search")
    got = {tuple(a["coeffs"]) for a in rep["accepted"]}
    want = set()
    for a in range(-3, 4):
        for b in range(-3, 4):
            disc = a * a * b * b - 4 * b**3 + 4 * a**3 - 18 * a * b - 27  # disc of x^3 + a x^2 + b x - 1
            if disc < 0 and a + b < 0:
                want.add((-1, b, a, 1))
    assert got == want
    assert ak.search(3, 3, workers=4) == rep


def test_geometry_and_ot():
    b = ak.build(ak.parse_poly("x^2 - 3x + 1"))
    validate(b, "build")
    t = ak.verify_torus(ak.parse_poly("x^3 - x - 1"), samples=10)
    assert t["deck_pullback"]["max_relative_deviation"] < 1e-10
    o = ak.verify_ot(2, samples=10)
    validate(o, "ot_report")
    assert o["passed"]["ricci_derived_form"]
    with pytest.raises(RuntimeError):
        ak.build(ak.parse_poly("x^2 + 3x + 1"))


def test_in_process_cli():
    code, out, _ = ak.run_cli(["certify", "x^3 - x - 1"])
    assert code == 0
    validate(json.loads(out), "profile")
    assert ak.run_cli(["nonsense"])[0] == 3


@pytest.mark.skipif(CLI is None, reason="ANOSOVKIT_CLI not set")
@pytest.mark.parametrize(
    "args,code,schema",
    [
        (["certify", "x^3 - x - 1"], 0, "profile"),
        (["certify", "x^4 - 2x^3 + x - 1"], 1, "profile"),
        (["replay", "x^2 - 4x + 1"], 0, "replay_run"),
        (["replay", "x^2 + 3x + 1"], 1, "error"),
        (["build", "x^3 - 2x^2 + x - 1"], 0, "build"),
        (["verify-torus", "x^2 - 3x + 1", "--samples", "5"], 0, "torus_report"),
        (["verify-ot", "--s", "1", "--samples", "5"], 0, "ot_report"),
        (["factor", "x^4 + 4"], 0, "factor"),
        (["search", "--degree", "4", "--bound", "2"], 0, "search"),
        (["certify", "2x^2 + 1"], 3, "error"),
    ],
)
def test_cli_binary(args, code, schema):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == code, proc.stderr
    validate(json.loads(proc.stdout), schema)


@pytest.mark.skipif(CLI is None, reason="ANOSOVKIT_CLI not set")
def test_cli_usage_error():
    proc = subprocess.run([CLI, "search", "--degree", "3"], capture_output=True, text=True)
    assert proc.returncode == 3
    assert "usage error" in proc.stderr
