from __future__ import annotations

import json
from pathlib import Path

import pytest

from skewclifford import cli

GOLDEN = Path(__file__).parent / "golden"
FAST = ["check", "present", "hilbert", "oracle"]


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="doc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.mark.parametrize("fixture", ["vvw-gca", "cv-5-3"])
@pytest.mark.parametrize("command", FAST)
def test_goldens(fixture, command, capsys):
    code, out, _ = run([command, "--input", f"fixture:{fixture}", "--format", "json"], capsys)
    assert code == 0
    assert out == (GOLDEN / f"{fixture}.{command}.json").read_text()


@pytest.mark.parametrize("fixture", ["vvw-gca", "cv-5-3"])
def test_count_goldens(fixture, capsys):
    argv = ["count", "--input", f"fixture:{fixture}", "--ext-degree", "1", "--format", "json"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out == (GOLDEN / f"{fixture}.count1.json").read_text()
    assert json.loads(out)["result"]["match"] is True


def test_json_key_order(capsys):
    _, out, _ = run(["hilbert", "--input", "fixture:cv-5-3", "--format", "json"], capsys)
    report = json.loads(out)
    assert list(report) == ["command", "field", "n", "result"]
    assert report["result"]["dimensions"] == [1, 4, 10, 20, 35]


def test_text_output(capsys):
    code, out, _ = run(["present", "--input", "fixture:cv-5-3"], capsys)
    assert code == 0
    assert out.startswith("present over F_13, n = 4\n")
    assert "x3*x4 - x4*x3 = 0" in out


def test_factor_two_ways(tmp_path, capsys):
    doc = {"field": {"p": 5}, "n": 2, "mu": [[1, 2], [3, 1]]}
    argv = ["factor", "--input", write(tmp_path, doc), "--form", "(z1+2*z2)^2", "--format", "json"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    res = json.loads(out)["result"]
    pairs = {(tuple(f["left"]), tuple(f["right"])) for f in res["factorizations"]}
    assert pairs == {((1, 2), (1, 2)), ((1, 1), (1, 4))}
    assert res["mu_rank"] == 1


def test_quantum_plane_count(tmp_path, capsys):
    doc = {"field": {"p": 5}, "n": 2, "mu": [[1, 2], [3, 1]], "forms": ["z1^2", "z2^2"]}
    argv = ["count", "--input", write(tmp_path, doc), "--max-ext", "1", "--format", "json"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    res = json.loads(out)["result"]
    assert (res["N"], res["stable"], res["report"]["gamma_count"]) == (6, False, 6)


# -- exit-code contract on injected faults ------------------------------------

QP = {"field": {"p": 5}, "n": 2, "mu": [[1, 2], [3, 1]]}


@pytest.mark.parametrize(
    "command, doc, extra, code",
    [
        ("check", {**QP, "forms": ["z1^2", "2*z1^2"]}, [], 2),
        ("present", {**QP, "forms": ["z1^2", "2*z1^2"]}, [], 2),
        ("hilbert", {**QP, "forms": ["z1^2", "2*z1^2"]}, [], 2),
        ("check", {**QP, "forms": ["z1^2", "z1*z2"]}, [], 2),
        ("check", {**QP, "forms": ["z1^2", "(z1+"]}, [], 1),
        ("check", {**QP, "mu": [[1, 2], [2, 1]], "forms": ["z1^2", "z2^2"]}, [], 1),
        ("check", {**QP, "forms": ["z1^2", "z2^2"], "extra": 0}, [], 1),
        ("check", {**QP, "field": {"p": 4}, "forms": ["z1^2", "z2^2"]}, [], 1),
        ("check", {**QP, "field": {"p": 2}, "forms": ["z1^2", "z2^2"]}, [], 1),
        ("count", {**QP, "forms": ["z1^2", "z2^2"]}, ["--budget", "5"], 1),
        ("count", {**QP, "forms": ["z1^2", "z2^2"]}, ["--max-ext", "0"], 1),
        ("factor", QP, [], 1),
        ("factor", QP, ["--form", "z1"], 1),
        ("hilbert", {**QP, "forms": ["z1^2", "z2^2"]}, ["--dmax", "9"], 1),
        (
            "factor",
            {"field": {"p": 5}, "n": 3, "mu": [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]},
            ["--form", "z1^2+z2^2+z3^2"],
            3,
        ),
    ],
)
def test_exit_codes(tmp_path, capsys, command, doc, extra, code):
    got, out, err = run([command, "--input", write(tmp_path, doc), "--format", "json", *extra], capsys)
    assert got == code
    if code == 2:
        assert "failure" in json.loads(out)
    elif code in (1, 3):
        assert err.startswith("error: ")
        assert "error" in json.loads(out)


def test_base_point_failure_report(tmp_path, capsys):
    doc = {**QP, "forms": ["z1^2", "z1*z2"]}
    code, out, _ = run(["check", "--input", write(tmp_path, doc), "--format", "json"], capsys)
    report = json.loads(out)
    assert code == 2 and report["failure"] == "base-point-found"
    assert report["result"]["certificates"]["base_points"]["base_points"][0]["a"] == [0, 1]


def test_dependent_failure_report(tmp_path, capsys):
    doc = {**QP, "forms": ["z1^2", "2*z1^2"]}
    code, out, _ = run(["check", "--input", write(tmp_path, doc), "--format", "json"], capsys)
    assert code == 2 and json.loads(out)["failure"] == "DependentMatrices"


def test_theorem_violation_lists_factorizations(tmp_path, capsys):
    doc = {"field": {"p": 5}, "n": 3, "mu": [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]]}
    argv = ["factor", "--input", write(tmp_path, doc), "--form", "z1^2+z2^2+z3^2", "--format", "json"]
    code, out, _ = run(argv, capsys)
    assert code == 3
    err = json.loads(out)["error"]
    assert err["type"] == "TheoremViolation" and len(err["factorizations"]) == 4


def test_parse_error_pointer(tmp_path, capsys):
    doc = {**QP, "forms": ["z1^2", "(z1+"]}
    _, out, _ = run(["check", "--input", write(tmp_path, doc), "--format", "json"], capsys)
    err = json.loads(out)["error"]
    assert err["pointer"] == "/forms/1" and "offset 4" in err["message"]


def test_stdin_input(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({**QP, "forms": ["z1^2", "z2^2"]})))
    code, out, _ = run(["present", "--input", "-"], capsys)
    assert code == 0 and "x1*x2 + 2*x2*x1 = 0" in out
