"""Command-line surface: exit codes, JSON schema, CSV layout, and
reproducibility, driven through the installed entry point."""

import json
import math
import subprocess
import sys

import pytest

_RUN = [sys.executable, "-m", "cuetraces.cli"]


def run_cli(*args, timeout=300):
    return subprocess.run(_RUN + list(args), capture_output=True,
                          text=True, timeout=timeout)


def test_bounds_json_payload_and_uniform_block():
    res = run_cli("bounds", "--n", "4322", "--m", "10")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["schema_version"] == "1"
    assert payload["tv_uniform"]["m_max"] == 5
    assert payload["tv_uniform"]["bound"]["log10_mag"] <= -367.0
    assert payload["tv_uniform"]["bound"]["sign"] == 1
    assert payload["tv_uniform"]["eps_n"] <= 0.711
    assert payload["delta2_bound"]["log10_mag"] < -200.0
    # keys are emitted sorted for byte stability
    assert res.stdout == json.dumps(payload, indent=2, sort_keys=True) + "\n"
    assert "elapsed_s=" in res.stderr


def test_bounds_applicability_exit_code():
    res = run_cli("bounds", "--n", "100", "--m", "30")
    assert res.returncode == 3
    assert "N > 4m violated" in res.stderr
    assert res.stdout == ""


def test_usage_error_exit_code():
    res = run_cli("bounds")  # --n is required
    assert res.returncode == 2
    res = run_cli("frobnicate")
    assert res.returncode == 2
    res = run_cli("table", "nope")
    assert res.returncode == 2


def test_table_commands_certify():
    res = run_cli("table", "cM")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["passed"] and payload["max_rel_error"] < 0.005
    assert len(payload["rows"]) == 11
    res = run_cli("table", "gamma")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["passed"] and payload["min_slack"] > 0.0


def test_curve_theta_csv(tmp_path):
    out = tmp_path / "theta.csv"
    res = run_cli("curve", "theta", "--m", "3", "--out", str(out))
    assert res.returncode == 0
    lines = out.read_text().strip().split("\n")
    meta = [ln for ln in lines if ln.startswith("# meta:")]
    assert any("schema_version=1" in ln for ln in meta)
    header_idx = next(i for i, ln in enumerate(lines) if not ln.startswith("#"))
    assert lines[header_idx] == "n,N,log10_theta0,log10_theta1,log10_theta2,log10_theta3"
    first = lines[header_idx + 1].split(",")
    assert int(first[0]) == 30 and float(first[1]) == 10.0
    assert first[3] == ""  # theta1 column blank while inapplicable
    last = lines[-1].split(",")
    assert int(last[0]) == 6000 and float(last[1]) == 2000.0
    assert float(last[2]) < -4000.0


def test_curve_delta2_bound_notes_bound_semantics(tmp_path):
    out = tmp_path / "d2.csv"
    res = run_cli("curve", "delta2-bound", "--m", "3",
                  "--n-range", "100:130:10", "--out", str(out))
    assert res.returncode == 0
    text = out.read_text()
    assert "upper bound" in text  # the note meta line flags bound semantics
    rows = [ln for ln in text.strip().split("\n") if not ln.startswith("#")]
    assert rows[0] == "n,log10_delta2_bound"
    ns = [int(r.split(",")[0]) for r in rows[1:]]
    assert ns == [100, 110, 120, 130]  # a:b:s is endpoint inclusive


def test_charfn_residual_small():
    res = run_cli("charfn", "--xi", "0.5,0.3,0.2,0.1", "--n", "12")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["residual_rel"] < 1e-10
    tz = payload["toeplitz"]["value"]
    bo = payload["borodin_okounkov"]["value"]
    assert math.isclose(tz["re"], bo["re"], rel_tol=1e-10)


def test_verify_generator_exit_zero():
    res = run_cli("verify", "generator")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["results"]["generator"]["passed"]
    assert payload["results"]["generator"]["max_residual"] < 1e-9


def test_verify_stein_designed_failure():
    res = run_cli("verify", "stein", "--reps", "2000")
    assert res.returncode == 1
    payload = json.loads(res.stdout)
    stein = payload["results"]["stein"]
    assert not stein["passed"]
    assert all(c["pass_A"] for c in stein["cases"])
    assert not any(c["pass_B"] for c in stein["cases"])


def test_sample_byte_identical(tmp_path):
    f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (f1, f2):
        res = run_cli("sample", "--n", "8", "--m", "3", "--reps", "5",
                      "--seed", "123", "--out", str(f))
        assert res.returncode == 0
    assert f1.read_bytes() == f2.read_bytes()
    body = [ln for ln in f1.read_text().strip().split("\n")
            if not ln.startswith("#")]
    assert body[0] == "rep,k,re_Tk,im_Tk"
    assert len(body) == 1 + 5 * 3


def test_estimate_delta2_payload():
    res = run_cli("estimate", "delta2-m1", "--n", "5")
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["value"] == pytest.approx(6.688160e-3, rel=1e-5)
    assert payload["error_estimate"] < 1e-8
    assert payload["log10_value"] == pytest.approx(math.log10(6.688160e-3), abs=1e-4)


def test_estimate_delta2_divergent_exit_one():
    res = run_cli("estimate", "delta2-m1", "--n", "2")
    assert res.returncode == 1
    assert "error:" in res.stderr and "decay exponent" in res.stderr


def test_seed_is_unsigned_decimal():
    res = run_cli("sample", "--n", "4", "--m", "2", "--reps", "2",
                  "--seed", "18446744073709551615")
    assert res.returncode == 0
    res = run_cli("sample", "--n", "4", "--m", "2", "--reps", "2",
                  "--seed", "-1")
    assert res.returncode == 2
