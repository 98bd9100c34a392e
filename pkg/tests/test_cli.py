import json

import pytest
from click.testing import CliRunner

from pncrit.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args, ok=(0,)):
    result = runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    assert result.exit_code in ok, result.output
    return result


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return str(path)


def test_construct_power(runner):
    out = json.loads(run(runner, "construct", "power", "--n", 2, "--d", 2).output)
    assert out == {"n": 2, "d": 2, "coords": ["x0^2", "x1^2", "x2^2"], "params": {}}


def test_construct_sympow_is_a_quadratic_map(runner):
    out = json.loads(run(runner, "construct", "sympow", "--n", 2, "--p1", "z^2-1").output)
    assert out["n"] == 2 and out["d"] == 2 and len(out["coords"]) == 3


def test_hyperplane_witness_has_expected_fiber(runner, tmp_path):
    out = json.loads(run(runner, "--seed", 7, "construct", "hyperplane",
                         "--n", 2, "--d", 3, "--e", 2).output)
    w = out["witness"]
    assert w["e"] == 2 and len(w["simple_points"]) == 7
    path = write(tmp_path, "w.json", out)
    report = json.loads(run(runner, "verify", path).output)
    assert report["all_pass"]
    fiber = next(c for c in report["checks"] if c["name"] == "fiber")
    assert sorted(fiber["detail"]["multiplicities"]) == [1] * 7 + [2]


def test_analyze_pcf_and_fixed_on_power_map(runner, tmp_path):
    path = write(tmp_path, "power.json", run(runner, "construct", "power", "--n", 2, "--d", 2).output)
    pcf = json.loads(run(runner, "analyze", "pcf", path, "--K", 4, "--L", 2).output)
    assert pcf["type"] == [1, 0]
    fixed = json.loads(run(runner, "analyze", "fixed", path).output)
    assert fixed["projective_dimension"] == 0 and fixed["count"] == 7


def test_analyze_pcf_on_family_t1(runner, tmp_path):
    # the t = 1 member is PCF of type (2, 0); see the notes on the family
    text = run(runner, "construct", "family", "--n", 2, "--d", 2, "--t", 1).output
    path = write(tmp_path, "family.json", text)
    pcf = json.loads(run(runner, "analyze", "pcf", path, "--K", 6, "--L", 3).output)
    assert pcf["type"] == [2, 0]
    text = run(runner, "construct", "family", "--n", 2, "--d", 2, "--t", -1).output
    path = write(tmp_path, "family_m1.json", text)
    pcf = json.loads(run(runner, "analyze", "pcf", path, "--K", 3, "--L", 2).output)
    assert pcf["type"] is None


def test_pcf_certificate_round_trip(runner, tmp_path):
    path = write(tmp_path, "power.json", run(runner, "construct", "power", "--n", 2, "--d", 3).output)
    pcf = json.loads(run(runner, "analyze", "pcf", path).output)
    cert = write(tmp_path, "cert.json", pcf["certificate"])
    assert json.loads(run(runner, "verify", cert).output)["all_pass"]


def test_corrupted_witness_fails_fiber_check(runner, tmp_path):
    out = json.loads(run(runner, "construct", "hyperplane", "--n", 2, "--d", 2).output)
    w = out["witness"]
    w["p"], w["simple_points"][0] = w["simple_points"][0], w["p"]
    path = write(tmp_path, "bad.json", w)
    result = run(runner, "verify", path, ok=(1,))
    report = json.loads(result.output)
    assert not report["all_pass"]
    assert not next(c for c in report["checks"] if c["name"] == "fiber")["pass"]


def test_witness_on_p3_verifies(runner, tmp_path):
    out = run(runner, "construct", "hyperplane", "--n", 3, "--d", 2).output
    run(runner, "verify", write(tmp_path, "w3.json", out))


def test_output_is_byte_identical_across_runs(runner, tmp_path):
    path = write(tmp_path, "power.json", run(runner, "construct", "power", "--n", 2, "--d", 2).output)
    first = run(runner, "--seed", 3, "report", path).output
    second = run(runner, "--seed", 3, "report", path).output
    assert first == second
    a = run(runner, "--seed", 5, "construct", "hyperplane", "--n", 2, "--d", 2).output
    b = run(runner, "--seed", 5, "construct", "hyperplane", "--n", 2, "--d", 2).output
    assert a == b


def test_text_format_and_out_file(runner, tmp_path):
    target = tmp_path / "o.txt"
    run(runner, "--format", "text", "--out", target, "construct", "power", "--n", 1, "--d", 2)
    assert "x0^2" in target.read_text()


def test_exit_codes(runner, tmp_path):
    run(runner, "construct", "power", "--n", 0, "--d", 2, ok=(2,))
    run(runner, "construct", "family", "--n", 2, "--d", 2, "--t", "abc", ok=(2,))
    bad = write(tmp_path, "bad.json", {"n": 2, "d": 2, "coords": ["x0^2", "x0*x1", "x2^2"]})
    run(runner, "analyze", "critical", bad, ok=(2,))
    path = write(tmp_path, "power.json", run(runner, "construct", "power", "--n", 2, "--d", 3).output)
    run(runner, "--max-degree", 3, "analyze", "branch", path, ok=(3,))


def test_caps_from_environment(runner, tmp_path, monkeypatch):
    path = write(tmp_path, "power.json", run(runner, "construct", "power", "--n", 2, "--d", 3).output)
    monkeypatch.setenv("PN_CRIT_CAPS", json.dumps({"max_degree": 3}))
    run(runner, "analyze", "branch", path, ok=(3,))
