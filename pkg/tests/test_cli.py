"""CLI contract: grammar, formats, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from ascount import cli
from ascount.errors import InvariantViolation


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# count
# ---------------------------------------------------------------------------


def test_count_local(capsys):
    code, out, _ = run(capsys, "count", "local", "--p", "2", "--r", "1",
                       "--exp", "2")
    assert code == 0 and out == "2\n"


def test_count_global_degree(capsys):
    code, out, _ = run(capsys, "count", "global", "--p", "2", "--r", "1",
                       "--degree", "2")
    assert code == 0 and out == "6\n"


def test_count_divisors(capsys):
    cases = (
        (("--p", "2", "--r", "1", "--divisor", "t^2"), "2"),
        (("--p", "2", "--r", "1", "--divisor", "inf^2"), "2"),
        (("--p", "2", "--r", "1", "--divisor", "t2+t+1^2"), "6"),
        # conductor 1 mod p is impossible, so this degree-2 divisor is empty
        (("--p", "3", "--r", "1", "--divisor", "t2+1^2"), "0"),
        # F_4 coefficients as bracketed base-2 vectors: t + x where x = [0,1]
        (("--p", "2", "--n", "2", "--r", "1",
          "--divisor", "t+[0,1]^2,inf^2"), "18"),
    )
    for flags, expected in cases:
        code, out, _ = run(capsys, "count", "global", *flags)
        assert code == 0 and out == expected + "\n", flags


def test_divisor_grammar_errors(capsys):
    bad = (
        "t^0",          # multiplicities start at 1
        "t,t",          # repeated place
        "t2+1^2",       # reducible over F_2: (t+1)^2
        "[0,1]t",       # bracketed vector needs n > 1
        "2t",           # coefficient not reduced mod 2
        "t+[0,1",       # unbalanced bracket
        "",             # empty divisor
        "t+,inf",       # empty monomial
    )
    for spec in bad:
        code, _, err = run(capsys, "count", "global", "--p", "2", "--r", "1",
                           "--divisor", spec)
        assert code == 2, spec
        assert "error" in err.lower(), spec


def test_count_mode_flag_mismatch(capsys):
    code, _, _ = run(capsys, "count", "local", "--p", "2", "--r", "1",
                     "--degree", "2")
    assert code == 2
    code, _, _ = run(capsys, "count", "global", "--p", "2", "--r", "1",
                     "--exp", "2")
    assert code == 2
    code, _, _ = run(capsys, "count", "local", "--p", "2", "--r", "1")
    assert code == 2


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------


def test_series_plain_global(capsys):
    code, out, _ = run(capsys, "series", "global", "--p", "2", "--r", "1",
                       "--max", "6")
    assert code == 0 and out == "1,0,6,0,24,0,96\n"


def test_series_plain_local(capsys):
    code, out, _ = run(capsys, "series", "local", "--p", "2", "--r", "1",
                       "--max", "6")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "1,0,2,0,4,0,8"
    assert lines[1] == "numerator: 1"
    assert lines[2] == "denominator: 1 - 2*u^2"
    assert lines[3] == "recurrence: c[m] = 2*c[m-2] for m > 0"


def test_series_json_local(capsys):
    code, out, _ = run(capsys, "series", "local", "--p", "2", "--r", "1",
                       "--max", "4", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["coefficients"] == ["1", "0", "2", "0", "4"]
    assert payload["numerator"] == ["1"]
    assert payload["denominator"] == ["1", "0", "-2"]
    assert payload["recurrence"] == ["0", "2"]
    assert payload["variable"] == "q^-s"


def test_series_tsv(capsys):
    code, out, _ = run(capsys, "series", "global", "--p", "2", "--r", "1",
                       "--max", "3", "--format", "tsv")
    assert code == 0
    assert out.splitlines() == ["0\t1", "1\t0", "2\t6", "3\t0"]


def test_series_out_file(tmp_path, capsys):
    target = tmp_path / "series.txt"
    code, out, _ = run(capsys, "series", "global", "--p", "2", "--r", "1",
                       "--max", "4", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "1,0,6,0,24\n"


def test_series_worker_independence(capsys, monkeypatch):
    base = run(capsys, "series", "global", "--p", "2", "--r", "2",
               "--max", "16")
    flagged = run(capsys, "series", "global", "--p", "2", "--r", "2",
                  "--max", "16", "--workers", "3")
    monkeypatch.setenv("ASCOUNT_WORKERS", "4")
    enved = run(capsys, "series", "global", "--p", "2", "--r", "2",
                "--max", "16")
    assert base == flagged == enved
    assert base[0] == 0


def test_bad_workers_env(capsys, monkeypatch):
    monkeypatch.setenv("ASCOUNT_WORKERS", "plenty")
    code, _, err = run(capsys, "series", "global", "--p", "2", "--r", "1",
                       "--max", "4")
    assert code == 2 and "ASCOUNT_WORKERS" in err


def test_series_negative_max(capsys):
    code, _, _ = run(capsys, "series", "global", "--p", "2", "--r", "1",
                     "--max", "-1")
    assert code == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_full_run(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "--budget", "100",
                       "--out", str(target))
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "20 of 20 items run, 0 failed"
    assert all("[     ok]" in line for line in lines[:-1])
    report = json.loads(target.read_text())
    assert report["ok"] is True
    assert len(report["results"]) == 20
    assert {r["suite"] for r in report["results"]} == \
        {"oracle", "psi", "integrality", "inequalities"}
    ineq = [r for r in report["results"] if r["suite"] == "inequalities"]
    assert "collapse j=p=2" in ineq[0]["detail"]


def test_verify_budget_shrinks_deterministically(capsys):
    # oracle suite: six local items (cost 1) then two global (cost 2);
    # shrinking drops the largest estimates first, later declarations
    # first among ties, so budget 3 keeps exactly the first three
    code, out, _ = run(capsys, "verify", "--suite", "oracle",
                       "--budget", "3", "--out", "-")
    assert code == 0
    lines = out.splitlines()
    assert sum("[     ok]" in l for l in lines) == 3
    assert sum("[skipped]" in l for l in lines) == 5
    assert "3 of 8 items run, 0 failed" in out
    again = run(capsys, "verify", "--suite", "oracle", "--budget", "3",
                "--out", "-")
    assert again[1] == out


def test_verify_never_drops_below_one_item(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "inequalities",
                       "--budget", "0.01")
    assert code == 0
    assert "1 of 1 items run, 0 failed" in out


def test_verify_seed_is_recorded(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "psi", "--budget", "2",
                       "--seed", "7")
    assert code == 0
    assert "seed 7" in out
    report = json.loads(out[out.index("{"):])
    assert report["seed"] == 7


def test_verify_bad_flags(capsys):
    code, _, _ = run(capsys, "verify", "--budget", "0")
    assert code == 2
    code, _, _ = run(capsys, "verify", "--suite", "nonsense")
    assert code == 2


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------


def test_asymptotics_local_payload(capsys):
    code, out, _ = run(capsys, "asymptotics", "--p", "2", "--r", "1",
                       "--local")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"p", "n", "r", "params", "pole_catalog",
                            "constants"}
    assert set(payload["pole_catalog"]) == {"local"}
    assert payload["params"]["abscissa"] == "1"
    assert payload["constants"]["values"]["0"] == 1.0


def test_asymptotics_fit(capsys):
    code, out, _ = run(capsys, "asymptotics", "--p", "2", "--r", "1",
                       "--fit-max", "20")
    assert code == 0
    payload = json.loads(out)
    assert payload["fits"]["classes"]["0"]["leading"] == pytest.approx(1.5)
    assert "klein_constant" not in payload
    assert "inequality_report" not in payload


def test_asymptotics_flag_conflicts(capsys):
    code, _, _ = run(capsys, "asymptotics", "--p", "2", "--r", "1",
                     "--local", "--fit-max", "10")
    assert code == 2
    code, _, _ = run(capsys, "asymptotics", "--p", "2", "--r", "1",
                     "--precision", "10")
    assert code == 2


# ---------------------------------------------------------------------------
# exit codes and the console script
# ---------------------------------------------------------------------------


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "count", "local", "--p", "4", "--r", "1",
               "--exp", "2")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert cli.main([]) == 2
    capsys.readouterr()


def test_invariant_failure_exits_1(capsys, monkeypatch):
    def boom(ctx, exponent):
        raise InvariantViolation("synthetic failure")

    monkeypatch.setattr(cli, "local_count", boom)
    code, _, err = run(capsys, "count", "local", "--p", "2", "--r", "1",
                       "--exp", "2")
    assert code == 1
    assert "invariant violation" in err


def test_console_script_roundtrip():
    result = subprocess.run(
        [sys.executable, "-m", "ascount.cli", "count", "global",
         "--p", "2", "--r", "1", "--degree", "4"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout == "24\n"
    result = subprocess.run(
        [sys.executable, "-m", "ascount.cli", "series", "local",
         "--p", "3", "--r", "1", "--max", "0", "--format", "tsv"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert result.stdout == "0\t1\n"
