import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from ctsense import censoring
from ctsense.models import FixedSizeDesign, NetworkModel, SensorProfile, uniform_profiles
from ctsense.special import reg_upper_gamma


def test_local_probabilities_use_scaled_tail():
    d = FixedSizeDesign(10, 0.0, 30.0)
    assert censoring.local_pf(d) == reg_upper_gamma(10, 15.0)
    assert censoring.local_pd(d, 1.0) == reg_upper_gamma(10, 7.5)


def test_zero_lower_threshold_never_sends_zero():
    d = FixedSizeDesign(4, 0.0, 12.0)
    d0, d1 = censoring.censor_deltas(d, 2.0)
    assert d0 == pytest.approx(1.0 - censoring.local_pf(d), abs=1e-15)
    assert d1 == pytest.approx(1.0 - censoring.local_pd(d, 2.0), abs=1e-15)


@given(
    n=st.integers(1, 30),
    l1=st.floats(0.0, 80.0),
    width=st.floats(0.0, 80.0),
    gamma=st.floats(0.05, 20.0),
)
def test_three_regions_partition(n, l1, width, gamma):
    d = FixedSizeDesign(n, l1, l1 + width)
    d0, d1 = censoring.censor_deltas(d, gamma)
    pf, pd = censoring.local_pf(d), censoring.local_pd(d, gamma)
    for p1, dl in ((pf, d0), (pd, d1)):
        assert 0.0 <= dl <= 1.0
        assert p1 + dl <= 1.0 + 1e-12
    assert pd >= pf - 1e-15


@settings(max_examples=50)
@given(n=st.integers(1, 20), frac=st.floats(0.0, 1.0), pi0=st.floats(0.01, 0.99))
def test_cost_nondecreasing_in_lambda1(n, frac, pi0):
    profiles = uniform_profiles(3, 1.0)
    net = NetworkModel(3, pi0, 0.1, 0.9)
    lam2 = 2.0 * n * 1.5
    lo = censoring.scheme_metrics(profiles, net, FixedSizeDesign(n, 0.0, lam2)).cost
    hi = censoring.scheme_metrics(profiles, net, FixedSizeDesign(n, frac * lam2, lam2)).cost
    assert np.all(hi >= lo - 1e-12)


def test_equal_snr_closed_form_detection_level():
    lam2, pd = censoring.lambda2_equal_snr(10, 1.0, 5, 0.9)
    assert pd == pytest.approx(1.0 - 0.1 ** 0.2, abs=1e-15)
    assert round(pd, 6) == 0.369043
    assert censoring.local_pd(FixedSizeDesign(10, 0.0, lam2), 1.0) == pytest.approx(pd, rel=1e-12)


@pytest.mark.parametrize("m", range(2, 11))
def test_closed_form_and_bisection_agree(m):
    profiles = uniform_profiles(m, 1.0)
    net = NetworkModel(m, 0.2, 0.1, 0.9)
    a = censoring.optimize_censoring(profiles, net, 10, method="closed-form")
    b = censoring.optimize_censoring(profiles, net, 10, method="bisection")
    assert a.feasible and b.feasible
    assert a.design.lambda1 == 0.0
    assert abs(a.design.lambda2 - b.design.lambda2) <= 1e-8
    for sol in (a, b):
        assert abs(sol.metrics.qd - 0.9) <= 1e-6
        assert sol.metrics.qf <= 0.1


def test_single_sensor_is_infeasible_at_default_levels():
    # one radio needs P_f = 0.206 for P_d = 0.9 at gamma = 1, N = 10
    net = NetworkModel(1, 0.2, 0.1, 0.9)
    a = censoring.optimize_censoring(uniform_profiles(1, 1.0), net, 10, method="closed-form")
    b = censoring.optimize_censoring(uniform_profiles(1, 1.0), net, 10, method="bisection")
    assert not a.feasible and not b.feasible
    assert a.margins["pf_required"] == pytest.approx(0.205857687, abs=1e-8)
    assert a.margins["pf_required"] == pytest.approx(b.margins["pf_required"], rel=1e-9)


def test_heterogeneous_snrs_meet_detection_floor():
    profiles = [SensorProfile(g) for g in (0.5, 1.0, 2.0, 4.0)]
    net = NetworkModel(4, 0.5, 0.1, 0.95)
    sol = censoring.optimize_censoring(profiles, net, 10)
    assert sol.feasible
    assert sol.extra.get("pd_target") is None
    assert sol.metrics.qd >= 0.95 - 1e-12
    assert sol.metrics.qd == pytest.approx(0.95, abs=1e-9)
    assert np.all(np.diff(sol.metrics.pd) > 0)


def test_closed_form_needs_equal_snrs():
    profiles = [SensorProfile(1.0), SensorProfile(2.0)]
    with pytest.raises(ValueError, match="equal"):
        censoring.optimize_censoring(profiles, NetworkModel(2, 0.5, 0.1, 0.9), 5, "closed-form")


def test_unknown_method():
    with pytest.raises(ValueError, match="unknown"):
        censoring.optimize_censoring(uniform_profiles(2, 1.0), NetworkModel(2, 0.5, 0.1, 0.9), 5, "newton")


def test_infeasible_reports_margins():
    profiles = uniform_profiles(2, 0.1)
    net = NetworkModel(2, 0.5, 0.01, 0.99)
    res = censoring.optimize_censoring(profiles, net, 2)
    assert not res.feasible
    m = res.margins
    assert m["pf_required"] > m["pf_bound"]
    assert m["qf_at_required"] > net.alpha
    assert math.isclose(m["pf_bound"], 1.0 - 0.99 ** 0.5, rel_tol=1e-12)


def test_profile_count_must_match():
    with pytest.raises(ValueError):
        censoring.optimize_censoring(uniform_profiles(3, 1.0), NetworkModel(5, 0.5, 0.1, 0.9), 10)
