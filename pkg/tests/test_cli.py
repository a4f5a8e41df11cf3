import csv
import json
import math
import subprocess
import sys

import pytest

from qubitcap.cli import EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, EXIT_PARTIAL, RunRecord, main
from qubitcap.entropy_bloch import shifted_depolarizing
from qubitcap.solver import holevo_capacity
from qubitcap.sweeps import GAP_COLUMNS, SWEEP_COLUMNS, fmt, worker_count


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_capacity_json(capsys):
    code, out, _ = run(capsys, "capacity", "--l1", "0.5", "--l2", "0.5", "--l3", "0.5",
                       "--t", "0.5", "--no-timing")
    assert code == EXIT_OK
    rec = json.loads(out)
    assert rec["capacity"] == pytest.approx(0.321928094887, abs=1e-12)
    assert rec["regime"] == "Cond1TwoOnAxis"
    assert rec["tag"] == "Condition1"
    assert rec["A"] is None
    assert rec["timing_ms"] is None
    assert set(rec) == set(RunRecord.__dataclass_fields__)


def test_capacity_identity(capsys):
    code, out, _ = run(capsys, "capacity", "--l1", "1", "--l2", "1", "--l3", "1", "--t", "0")
    assert code == EXIT_OK
    assert json.loads(out)["capacity"] == 1.0


def test_capacity_non_cptp_exit(capsys):
    code, _, err = run(capsys, "capacity", "--l1", "0.8", "--l2", "0.1", "--l3", "0.1",
                       "--t", "0.7")
    assert code == EXIT_INVALID
    assert ">=" in err


def test_capacity_missing_flags(capsys):
    code, _, err = run(capsys, "capacity", "--l1", "0.5")
    assert code == EXIT_INVALID
    assert "--preset" in err


@pytest.mark.parametrize(
    "argv",
    [("--preset", "ad"), ("--preset", "extremal", "--gamma", "0.3"), ("--preset", "ad", "--mu", "2")],
)
def test_capacity_bad_preset(capsys, argv):
    code, _, _ = run(capsys, "capacity", *argv)
    assert code == EXIT_INVALID


def test_capacity_text_and_extras(capsys):
    code, out, _ = run(capsys, "capacity", "--l1", "0.6", "--l2", "0.6", "--l3", "0.5",
                       "--t", "0.5", "--format", "text", "--gap", "--oracle")
    assert code == EXIT_OK
    assert "ThreeState" in out
    assert "two/three-state gap" in out
    assert "oracle capacity" in out


def test_capacity_preset_extremal(capsys):
    code, out, _ = run(capsys, "capacity", "--preset", "extremal", "--gamma", "0.7",
                       "--delta", "1.1")
    assert code == EXIT_OK
    assert json.loads(out)["regime"] == "Cond2TwoOffAxis"


@pytest.mark.parametrize(
    "argv, tag, A",
    [
        (("--l1", "0.6", "--l2", "0.6", "--l3", "0.5", "--t", "0.5"), "Indeterminate", 0.178),
        (("--preset", "ad", "--mu", "0.5"), "Condition2", 0.0),
        (("--l1", "0.5", "--l2", "0.5", "--l3", "0.5", "--t", "0.5"), "Condition1", None),
    ],
)
def test_classify(capsys, argv, tag, A):
    code, out, _ = run(capsys, "classify", *argv)
    assert code == EXIT_OK
    rec = json.loads(out)
    assert rec["tag"] == tag
    if A is None:
        assert rec["A"] is None
    else:
        assert rec["A"] == pytest.approx(A, abs=1e-3)


def test_run_record_round_trip():
    p = shifted_depolarizing(0.5)
    rec = RunRecord.from_solution(p, holevo_capacity(p), timing_ms=1.5)
    again = RunRecord.from_json(rec.to_json())
    assert again.to_dict() == rec.to_dict()
    assert again.capacity == float(format(rec.capacity, ".12g"))


def test_sweep_a(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep-a", "--lm-min", "0", "--lm-max", "1", "--steps", "201",
                     "--out", str(out))
    assert code == EXIT_OK
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert len(rows) == 201
    half = next(r for r in rows if float(r["lambda_m"]) == 0.5)
    assert half["tag"] == "Condition1"
    assert half["A"] == "undefined"
    for r in rows:
        if float(r["lambda_m"]) > 1 / math.sqrt(2) + 1e-9:
            assert r["is_cptp"] == "false" and r["tag"] == "NotCPTP"


def test_sweep_a_default_endpoint(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert run(capsys, "sweep-a", "--out", str(out))[0] == EXIT_OK
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    last = rows[-1]
    assert abs(float(last["A"])) < 1e-12
    assert last["tag"] == "Condition2"
    assert [r["tag"] for r in rows].count("Condition2") == 1


def test_sweep_a_unwritable(capsys):
    code, _, err = run(capsys, "sweep-a", "--out", "/nonexistent/dir/x.csv")
    assert code == EXIT_INTERNAL
    assert "cannot write" in err


def test_sweep_a_rejects_one_step(capsys):
    with pytest.raises(SystemExit):
        main(["sweep-a", "--steps", "1", "--out", "x.csv"])


def test_gap_scan_small(tmp_path, capsys):
    out = tmp_path / "gaps.csv"
    code, _, _ = run(capsys, "gap-scan", "--samples", "20", "--seed", "3", "--out", str(out))
    assert code == EXIT_OK
    text = out.read_bytes()
    assert b"\r" not in text
    rows = list(csv.DictReader(text.decode().splitlines()))
    assert tuple(rows[0]) == GAP_COLUMNS
    assert len(rows) == 20
    for r in rows:
        assert 0 < float(r["A"]) < 0.5
        assert 0 <= float(r["gap"]) < 0.004


def test_gap_scan_partial(tmp_path, capsys, monkeypatch):
    import qubitcap.sweeps as sweeps
    from qubitcap.exceptions import SamplingError

    real = sweeps.sample_cptp

    def flaky(seed, a_interval=None, **kw):
        if seed == sweeps.derive_seed(3, 2):
            raise SamplingError("budget")
        return real(seed, a_interval, **kw)

    monkeypatch.setattr(sweeps, "sample_cptp", flaky)
    out = tmp_path / "gaps.csv"
    code, _, err = run(capsys, "gap-scan", "--samples", "5", "--seed", "3", "--out", str(out))
    assert code == EXIT_PARTIAL
    assert "budget" in err
    assert len(out.read_text().splitlines()) == 3


@pytest.mark.parametrize("threads", ["1", "3", "0"])
def test_gap_scan_thread_independent(tmp_path, capsys, monkeypatch, threads):
    ref = tmp_path / "ref.csv"
    monkeypatch.setenv("HOLEVO_THREADS", "1")
    run(capsys, "gap-scan", "--samples", "24", "--seed", "7", "--out", str(ref))
    monkeypatch.setenv("HOLEVO_THREADS", threads)
    other = tmp_path / "other.csv"
    run(capsys, "gap-scan", "--samples", "24", "--seed", "7", "--out", str(other))
    assert ref.read_bytes() == other.read_bytes()


def test_worker_count(monkeypatch):
    monkeypatch.setenv("HOLEVO_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("HOLEVO_THREADS", "0")
    assert worker_count() >= 1


def test_validate_fixtures(capsys):
    code, out, _ = run(capsys, "validate", "--samples", "0", "--n-phi", "801", "--n-q", "801")
    rec = json.loads(out)
    assert code == EXIT_OK
    assert rec["passed"]
    assert rec["max_abs_diff"] <= 5e-5


def test_validate_zero_tolerance_fails(capsys):
    code, out, _ = run(capsys, "validate", "--samples", "2", "--no-fixtures", "--tol", "0",
                       "--n-phi", "201", "--n-q", "201")
    assert code != EXIT_OK
    assert json.loads(out)["passed"] is False


def test_validate_nothing_to_do():
    with pytest.raises(SystemExit):
        main(["validate", "--samples", "0", "--no-fixtures"])


def test_fmt():
    assert fmt(None) == "undefined"
    assert fmt(True) == "true"
    assert fmt(1 / 3) == "0.333333333333"


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "qubitcap", "capacity", "--preset", "sdep", "--mu", "0.5",
         "--no-timing"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0
    assert json.loads(res.stdout)["capacity"] == pytest.approx(0.321928094887)
