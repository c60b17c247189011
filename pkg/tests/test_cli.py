import json

import pytest

from grolab.certify import all_certified_checks
from grolab.cli import RunConfig, UsageError, main, run, sweep
from grolab.profiles import profile_from_text
from grolab.reporting import (
    Check,
    VerificationOutcome,
    emit_report,
    outcome_to_dict,
    to_json,
)


def test_run_each_command():
    for command in ("constants", "baseline", "pairing", "chain"):
        outcome = run(RunConfig(command=command))
        assert outcome.overall, [c.name for c in outcome.checks if not c.passed]


def test_run_profile_and_explore():
    for command in ("profile", "explore"):
        outcome = run(RunConfig(command=command))
        assert outcome.overall, [c.name for c in outcome.checks if not c.passed]


def test_unknown_command_rejected():
    with pytest.raises(UsageError):
        RunConfig(command="bogus")


def test_certified_checks_all_pass():
    checks = all_certified_checks()
    assert len(checks) >= 18
    for c in checks:
        assert c.passed, f"{c.name}: [{c.lo}, {c.hi}] vs {c.requirement}"
        assert c.lo <= c.hi


def test_emit_report_deterministic(tmp_path):
    outcome = VerificationOutcome(checks=(
        Check("a", 1.0, 1.0 + 1e-13, 1e-12, True),
        Check("b", None, None, None, True),
    ))
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    emit_report(outcome, str(p1))
    emit_report(outcome, str(p2))
    assert p1.read_bytes() == p2.read_bytes()
    parsed = json.loads(p1.read_text())
    assert parsed["overall"] is True
    assert parsed["checks"][0]["actual"] == 1.0 + 1e-13  # exact round-trip
    assert parsed == outcome_to_dict(outcome)


def test_emit_report_empty_and_failing(tmp_path):
    empty = VerificationOutcome(checks=())
    path = tmp_path / "empty.json"
    emit_report(empty, str(path))
    assert json.loads(path.read_text()) == {"checks": [], "overall": True}
    failing = VerificationOutcome(checks=(
        Check("bad", 1.0, 2.0, 1e-12, False),))
    assert not failing.overall


def test_emit_report_bad_path():
    outcome = VerificationOutcome(checks=())
    with pytest.raises(OSError):
        emit_report(outcome, "/nonexistent-dir-xyz/report.json")


def test_to_json_float_precision():
    text = to_json({"x": 0.1, "y": [1e-300, 2.5]})
    parsed = json.loads(text)
    assert parsed["x"] == 0.1
    assert parsed["y"][0] == 1e-300


def test_main_exit_codes(tmp_path):
    assert main(["constants"]) == 0
    # a beta large enough that the chain certifies no drop -> check fails
    assert main(["chain", "--beta", "4e-24"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["bogus-command"])
    assert exc.value.code == 2
    out = tmp_path / "report.json"
    assert main(["constants", "--out", str(out)]) == 0
    parsed = json.loads(out.read_text())
    assert parsed["overall"] is True


def test_main_byte_determinism(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["pairing", "--seed", "5", "--out", str(p1)]) == 0
    assert main(["pairing", "--seed", "5", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_sweep_lambda_peak():
    cfg = RunConfig(command="constants")
    csv_text = sweep("lambda", (0.15, 0.25, 101), cfg)
    lines = csv_text.strip().splitlines()
    assert lines[0].startswith("lambda,")
    rows = [list(map(float, ln.split(","))) for ln in lines[1:]]
    best = max(rows, key=lambda r: r[-1])
    assert abs(best[0] - 0.1975) <= 1e-3
    assert csv_text.endswith("\n") and "\r" not in csv_text


def test_sweep_epsilon_crossing():
    cfg = RunConfig(command="constants")
    csv_text = sweep("epsilon", (1e-9, 1e-5, 50), cfg)
    rows = [ln.split(",") for ln in csv_text.strip().splitlines()[1:]]
    vals = [(float(e), float(k)) for e, k in rows]
    assert vals[0][1] > 0.0
    # kappa_eff stays positive through 1e-7 and goes negative before 1e-4
    csv_wide = sweep("epsilon", (1e-7, 1e-4, 40), cfg)
    wide = [ln.split(",") for ln in csv_wide.strip().splitlines()[1:]]
    wvals = [float(k) for _, k in wide]
    assert wvals[0] > 0.0
    assert min(wvals) < 0.0


def test_sweep_validation():
    cfg = RunConfig(command="constants")
    with pytest.raises(UsageError):
        sweep("lambda", (0.2, 0.1, 5), cfg)
    with pytest.raises(UsageError):
        sweep("lambda", (0.1, 0.2, 1), cfg)
    with pytest.raises(UsageError):
        sweep("nonsense", (0.1, 0.2, 5), cfg)


def test_sweep_cli_entry(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--parameter", "grid", "--lo", "64", "--hi", "256",
                 "--steps", "3", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "grid,lp_value,abs_error_vs_dual"
    assert len(lines) == 4
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--parameter", "lambda", "--lo", "0.1", "--hi", "0.2"])
    assert exc.value.code == 2  # missing --steps


def test_config_file_and_profile_io(tmp_path):
    saved = tmp_path / "maximizer.txt"
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        f"save_profile = {saved}\nseed = 3\n# comment line\n", encoding="utf-8")
    assert main(["profile", "--config", str(cfg_file)]) == 0
    prof = profile_from_text(saved.read_text())
    assert prof.tail_rule == "sign"
    # reload it through the profile command
    cfg2 = tmp_path / "run2.cfg"
    cfg2.write_text(f"profile = {saved}\n", encoding="utf-8")
    assert main(["profile", "--config", str(cfg2)]) == 0


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("unknown_key = 1\n", encoding="utf-8")
    assert main(["constants", "--config", str(bad)]) == 2
    malformed = tmp_path / "malformed.cfg"
    malformed.write_text("just some text\n", encoding="utf-8")
    assert main(["constants", "--config", str(malformed)]) == 2
    assert main(["constants", "--config", str(tmp_path / "missing.cfg")]) == 2
