import json
from pathlib import Path

import pytest

from ctsense import cli, experiments


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_sweep_to_file(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _ = run(capsys, "sweep", "--scheme", "censoring", "--values", "0.5,0.9", "--out", str(out))
    assert code == 0
    lines = out.read_text().split("\n")
    assert lines[0].startswith("scheme,variable,value,pi0,feasible")
    assert len(lines) == 1 + 4 + 1 and lines[-1] == ""


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scheme": "censoring", "variable": "M", "values": [2, 3], "pi0": [0.5]}))
    code, out = run(capsys, "sweep", "--config", str(cfg), "--beta", "0.8")
    assert code == 0
    rows = out.strip().split("\n")[1:]
    assert len(rows) == 2
    assert all(",M," in r for r in rows)


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"values": [0.9, 0.1]}))
    code, out = run(capsys, "sweep", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG
    msg = json.loads(out)
    assert msg["status"] == "config-error" and msg["error"].startswith("config.values")


def test_bad_json(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text("{not json")
    code, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == cli.EXIT_CONFIG


def test_verify_theorems(capsys):
    code, out = run(capsys, "verify-theorems")
    assert code == 0
    report = json.loads(out)
    assert all(c["passed"] for c in report["checks"])


def test_validate_oracle_pass(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(experiments, "Z_LIMIT", 4.5)
    out = tmp_path / "r.json"
    code, _ = run(capsys, "validate-oracle", "--suites", "censoring", "--trials", "20000", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text())["failures"] == []


def test_validate_oracle_failure_summary(capsys, monkeypatch):
    monkeypatch.setattr(experiments.censoring, "local_pf", lambda d: 0.9)
    code, out = run(capsys, "validate-oracle", "--suites", "censoring", "--trials", "5000")
    assert code == cli.EXIT_FAIL
    summary = json.loads(out)
    assert summary["status"] == "fail" and summary["failures"]


def test_sweep_recheck_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(cli, "run_sweep", lambda spec: _Fake())
    code, out = run(capsys, "sweep")
    assert code == cli.EXIT_FAIL
    assert json.loads(out.split("\n", 1)[1])["failures"] == [{"check": "constraints"}]


class _Fake:
    failures = [{"check": "constraints"}]

    def to_csv(self):
        return "header\n"


def test_requires_subcommand():
    with pytest.raises(SystemExit):
        cli.main([])


@pytest.mark.parametrize("path", sorted(Path(__file__).resolve().parent.parent.glob("configs/*.json")))
def test_shipped_configs_validate(path):
    spec = experiments.SweepSpec.from_dict(json.loads(path.read_text()))
    assert spec.values
