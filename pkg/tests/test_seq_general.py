import math

from hypothesis import assume, given, settings, strategies as st
import numpy as np
import pytest

from ctsense import quadrature, seq_general as sg, seq_relaxed as sr
from ctsense.models import NetworkModel, SensorProfile, SequentialDesign, uniform_profiles


@pytest.mark.parametrize("k", range(0, 9))
@pytest.mark.parametrize("zeta", [0.0, 0.3, 2.0, 7.5])
def test_zero_knots_give_simplex_volume(k, zeta):
    basis = sg.FBasis.build([0.0] * k)
    assert sg.f_eval(basis, zeta) == pytest.approx(zeta**k / math.factorial(k), rel=1e-13, abs=1e-300)


@given(st.lists(st.floats(0.0, 5.0), min_size=1, max_size=8))
def test_coefficients_are_prefix_stable(raw):
    knots = sorted(raw)
    full = sg.FBasis.build(knots).coeffs
    for k in range(len(knots)):
        assert sg.FBasis.build(knots[:k]).coeffs == full[: k + 1]


def _volume2(e1, e2, z):
    # {e1 <= z1 <= z2 <= z, z2 >= e2}
    lo, hi = e1, z
    if hi <= lo:
        return 0.0
    f = lambda z1: max(0.0, z - max(e2, z1))  # noqa: E731
    from scipy.integrate import quad

    return quad(f, lo, hi, points=[e2] if lo < e2 < hi else None, epsabs=1e-14)[0]


@pytest.mark.parametrize("e1, e2, z", [(0.0, 0.0, 2.0), (0.0, 1.0, 3.0), (0.5, 2.0, 2.5), (1.0, 1.0, 4.0)])
def test_two_knot_volume(e1, e2, z):
    basis = sg.FBasis.build([e1, e2])
    assert sg.f_eval(basis, z) == pytest.approx(_volume2(e1, e2, z), rel=1e-12)


def test_knots_validated():
    with pytest.raises(ValueError):
        sg.FBasis.build([1.0, 0.5])
    with pytest.raises(ValueError):
        sg.FBasis.build([-0.1, 0.5])


def test_indices():
    d = SequentialDesign(8, -3.0, 2.0, 1.5)
    assert d.p == 2
    # a_j <= b_1 = 3.5 holds for a_j = -3 + 1.5 j up to j = 4
    assert sg.q_index(d) == 4
    assert d.lower()[3] <= d.upper()[0] < d.lower()[4]
    # b_s < c <= b_{s+1}
    for c in (3.6, 5.0, 7.9, 12.0):
        s = sg.s_index(d, c)
        b = lambda j: d.b_bar + j * d.bias  # noqa: E731
        assert c <= b(s + 1) and (s == 0 or b(s) < c)


designs = st.builds(
    lambda n, frac, b, bias: SequentialDesign(n, -frac * n * bias, b, bias),
    st.integers(2, 10),
    st.floats(0.05, 0.99),
    st.floats(0.1, 8.0),
    st.floats(1.05, 2.0),
)


@settings(max_examples=200)
@given(designs, st.data())
def test_psi_regimes_match_max_form(d, data):
    n = data.draw(st.integers(2, d.n_trunc))
    i = data.draw(st.integers(0, n - 2))
    a = lambda j: sg._lower_ext(d, j)  # noqa: E731
    c = data.draw(st.floats(a(n - 1), a(n - 1) + 10.0))
    assume(c >= a(n - 1))
    try:
        psi = sg.psi_vector(n, i, c, d)
    except sg.StructuralError:
        # regime gaps are only allowed where the index sets do not meet
        q, s = sg.q_index(d), sg.s_index(d, c)
        assert not (i <= n - q - 2 or n - q - 1 <= i <= s - 1 or s <= i)
        return
    bi = d.b_bar + (i + 1) * d.bias
    expected = [max(a(j), bi) for j in range(i + 1, n)] + [max(c, bi)]
    np.testing.assert_allclose(psi, expected, rtol=1e-12, atol=1e-12)
    assert np.all(np.diff(psi) >= 0)


def test_psi_rejects_bad_index():
    d = SequentialDesign(5, -3.0, 2.0, 1.5)
    with pytest.raises(sg.StructuralError):
        sg.psi_vector(4, 3, 5.0, d)


def test_first_step_continuation_closed_form():
    d = SequentialDesign(3, -1.0, 2.0, 1.5)
    th = 0.25
    a1, b1 = d.lower()[0], d.upper()[0]
    expected = (math.exp(-th * a1) - math.exp(-th * b1)) / th
    assert sg.j_fn(1, th, d) == pytest.approx(expected, rel=1e-14)


@settings(max_examples=60)
@given(designs, st.floats(0.1, 5.0))
def test_mass_is_conserved(d, gamma):
    t = sg.crossing_probs(d, gamma)
    for up, low, cont in ((t.upper_h0, t.lower_h0, t.cont_h0), (t.upper_h1, t.lower_h1, t.cont_h1)):
        total = cont + np.cumsum(up) + np.cumsum(low)
        np.testing.assert_allclose(total, 1.0, atol=1e-8)
        assert np.all(np.diff(cont) <= 1e-12)
        assert np.all(low >= -1e-9)
    assert t.volumes[0] == 1.0


@settings(max_examples=40)
@given(st.integers(1, 30), st.floats(0.1, 10.0), st.floats(1.05, 2.0), st.floats(0.2, 4.0))
def test_relaxed_limit_agrees(n, b, bias, gamma):
    d = SequentialDesign(n, -n * bias * 1.3, b, bias)
    profiles = [SensorProfile(gamma)]
    net = NetworkModel(1, 0.4, 0.5, 0.5)
    g = sg.seq_metrics_general(profiles, net, d)
    r = sr.seq_metrics(profiles, net, d)
    for name in ("pf", "pd", "rho", "asn", "cost", "qf", "qd"):
        np.testing.assert_allclose(getattr(g, name), getattr(r, name), rtol=0, atol=1e-9)


@pytest.mark.parametrize(
    "d, gamma",
    [
        (SequentialDesign(4, -0.5, 0.3, 1.5), 1.0),
        (SequentialDesign(3, -2.0, 1.0, 1.2), 2.0),
        (SequentialDesign(4, -5.9, 4.0, 1.5), 0.5),
    ],
)
def test_against_nested_quadrature(d, gamma):
    t = sg.crossing_probs(d, gamma)
    lower, upper = d.lower(), d.upper()
    for n in range(1, d.n_trunc + 1):
        th = sr.rate(gamma)
        assert t.cont_h1[n - 1] == pytest.approx(quadrature.continuation(lower, upper, n, th), rel=1e-6)
        assert t.upper_h1[n - 1] == pytest.approx(quadrature.upper_crossing(lower, upper, n, th), rel=1e-6)
        assert t.volumes[n - 1] == pytest.approx(quadrature.volume(lower, upper, n), rel=1e-6)


def test_truncation_limit():
    with pytest.raises(ValueError, match="exceeds"):
        sg.crossing_probs(SequentialDesign(31, -1.0, 1.0, 1.5), 1.0)


def test_two_dimensional_optimizer(network):
    profiles = uniform_profiles(5, 1.0)
    sol = sg.optimize_2d(profiles, network, 6, grid_resolution=8)
    assert sol.feasible
    m = sol.metrics
    assert m.qf <= network.alpha and m.qd >= network.beta - 1e-9
    audit = sol.extra["audit"]
    assert audit.feasible.any()
    best = audit.max_cost[audit.feasible].min()
    assert m.max_cost == pytest.approx(best, rel=1e-12)
    front = audit.pareto()
    assert front.size >= 1 and np.all(audit.feasible[front])
    relaxed = sr.optimize_b(profiles, network, 6)
    assert m.max_cost <= relaxed.metrics.max_cost + 1e-3


def test_two_dimensional_infeasible():
    res = sg.optimize_2d(uniform_profiles(2, 0.2), NetworkModel(2, 0.5, 1e-4, 0.999), 3, grid_resolution=4)
    assert not res.feasible
