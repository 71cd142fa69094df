import csv
import io

import pytest

from ctsense import experiments as ex


def test_defaults_validate():
    spec = ex.SweepSpec().validate()
    assert spec.schemes() == ex.SCHEMES


@pytest.mark.parametrize(
    "data, path",
    [
        ({"scheme": "tree"}, "config.scheme"),
        ({"variable": "gamma"}, "config.variable"),
        ({"values": []}, "config.values"),
        ({"values": [0.5, 0.3]}, "config.values"),
        ({"values": [0.5, 1.5]}, "config.values[1]"),
        ({"variable": "M", "values": [2, 2.5]}, "config.values[1]"),
        ({"pi0": [0.2, 1.0]}, "config.pi0[1]"),
        ({"alpha": "0.1"}, "config.alpha"),
        ({"snr_db": [0.0, 1.0]}, "config.snr_db"),
        ({"variable": "M", "values": [2, 3], "snr_db": [0.0] * 5}, "config.snr_db"),
        ({"bias": 0.9}, "config.bias"),
        ({"scheme": "seq-general", "n_samples": 31}, "config.n_samples"),
        ({"scheme": "seq-relaxed", "variable": "N", "values": [10, 200]}, "config.values"),
        ({"colour": 1}, "config.colour"),
    ],
)
def test_config_errors_name_the_field(data, path):
    with pytest.raises(ex.ConfigError) as info:
        ex.SweepSpec.from_dict(data)
    assert info.value.path == path
    assert str(info.value).startswith(path)


def test_point_applies_swept_variable():
    spec = ex.SweepSpec(variable="ct_over_cs", values=[100.0], cost_sense=2.0).validate()
    profiles, net, n = spec.point(100.0, 0.2)
    assert profiles[0].cost_tx == 200.0 and net.pi0 == 0.2 and n == 10
    spec = ex.SweepSpec(variable="M", values=[3]).validate()
    profiles, net, _ = spec.point(3, 0.5)
    assert len(profiles) == 3 == net.num_sensors
    spec = ex.SweepSpec(variable="snr_db", values=[10.0]).validate()
    assert spec.point(10.0, 0.5)[0][0].gamma == pytest.approx(10.0)


def test_heterogeneous_snr_list():
    spec = ex.SweepSpec(scheme="censoring", snr_db=[-3.0, 0.0, 3.0], num_sensors=3).validate()
    res = ex.run_sweep(spec)
    row = res.rows[0]
    assert row["feasible"] == "1"
    assert float(row["pd_min"]) < float(row["pd_max"])


def test_fmt():
    assert ex.fmt(None) == ""
    assert ex.fmt(1.0 / 3.0) == "0.333333333"
    assert ex.fmt(10) == "10"


def test_sweep_rows_and_order():
    spec = ex.SweepSpec(values=[0.5, 0.9], pi0=[0.2, 0.8], grid_resolution=4, scan_points=200).validate()
    res = ex.run_sweep(spec)
    assert not res.failures
    keys = [(r["pi0"], r["value"], r["scheme"]) for r in res.rows]
    assert keys == [
        (p, v, s) for p in ("0.2", "0.8") for v in ("0.5", "0.9") for s in ex.SCHEMES
    ]
    table = list(csv.reader(io.StringIO(res.to_csv())))
    assert tuple(table[0]) == ex.HEADER
    assert len(table) == 13


def test_infeasible_rows_carry_margins_only():
    spec = ex.SweepSpec(variable="M", values=[1, 2], scheme="censoring").validate()
    res = ex.run_sweep(spec)
    bad = [r for r in res.rows if r["value"] == "1"]
    assert all(r["feasible"] == "0" for r in bad)
    for r in bad:
        assert float(r["qf_margin"]) < 0
        assert r["lambda2"] == r["pf"] == r["max_cost"] == ""
        assert r["note"]


@pytest.mark.parametrize("scheme", ex.SCHEMES)
def test_infeasible_margins_for_each_scheme(scheme):
    spec = ex.SweepSpec(
        scheme=scheme, num_sensors=2, snr_db=-7.0, alpha=1e-4, beta=0.999, n_samples=3,
        values=[0.999], grid_resolution=3,
    ).validate()  # fmt: skip
    row = ex.run_sweep(spec).rows[0]
    assert row["feasible"] == "0"
    assert row["qf_margin"] != "" or row["qd_margin"] != ""


def test_recheck_flags_violations():
    spec = ex.SweepSpec(scheme="censoring").validate()
    row = ex.run_sweep(spec).rows[0]
    assert ex.recheck(row, spec) is None
    tampered = dict(row, lambda2="1.0")
    failure = ex.recheck(tampered, spec)
    assert failure["check"] == "constraints" and failure["qf"] > 0.1


def test_monte_carlo_columns():
    spec = ex.SweepSpec(scheme="censoring", trials=20000).validate()
    row = ex.run_sweep(spec).rows[0]
    assert abs(float(row["mc_qd_z"])) < 4.5
    assert 0.0 < float(row["mc_qd"]) < 1.0


def test_theorem_checks_pass_at_defaults():
    checks = ex.verify_theorems(ex.SweepSpec())
    assert [c.name for c in checks] == ["lambda1-monotone", "censoring-rate", "low-prior"]
    assert all(c.passed for c in checks)
    assert checks[1].witness["designs"] == 50


def test_general_grid_is_documented_and_inside_range():
    designs = ex.general_designs()
    assert len(designs) >= 20
    for d, gamma in designs:
        assert d.n_trunc <= 8
        assert -d.n_trunc * d.bias < d.a_bar < 0
        assert gamma > 0


def test_oracle_censoring_suite_small(monkeypatch):
    # plumbing check; the 3-sigma statistical gate lives in the acceptance suite
    monkeypatch.setattr(ex, "Z_LIMIT", 4.5)
    report = ex.validate_against_oracle(ex.SweepSpec(), ["censoring"], trials=50_000)
    assert report.passed
    assert report.comparisons == 3 * 3 * 3 * 2 * 3
    assert set(report.max_z) == {f"censoring/{q}_h{h}" for q in ("send1", "send0", "censor") for h in (0, 1)}


def test_oracle_failure_entries_name_the_point(monkeypatch):
    monkeypatch.setattr(ex.censoring, "local_pd", lambda d, g: 0.5)
    report = ex.validate_against_oracle(ex.SweepSpec(), ["censoring"], trials=20_000)
    assert not report.passed
    f = report.failures[0]
    assert f["suite"] == "censoring" and f["quantity"] == "send1_h1"
    assert {"n", "lambda1", "lambda2", "gamma"} <= set(f["design"])


def test_unknown_suite():
    with pytest.raises(ex.ConfigError):
        ex.validate_against_oracle(ex.SweepSpec(), ["fourier"])
