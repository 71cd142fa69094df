"""Truncated sequential sensing with both boundaries active.

For ``-N*bias <= a_bar < 0`` the lower boundary a_n = a_bar + n*bias turns
positive after p = floor(-a_bar/bias) steps and radios can also stop by
sending 0. Probabilities come from the volume of the continuation region,
computed by inclusion-exclusion over the step of the first upper crossing:

    A(n) = F(a_1..a_{n-1}; b_{n-1}) - sum_{i<=n-3} A(i+1) F(psi_i; b_{n-1})

where F(eta; z) is the volume of ordered points above the knots eta and
below z (the polynomial family built by ``FBasis``) and psi_i holds the
knots of the path suffix after the first crossing at step i+1. Then

    Pr(E_n | rate theta) = theta^(n-1) exp(-theta b_n) A(n)
    Pr(R_n | rate theta) = theta^n J_n(theta)

with J_n the exponentially weighted continuation integral (``j_fn``).
"""

from dataclasses import dataclass
import math

import numpy as np

from .kernels import continuation_prob, f_coefficients, f_value, general_table
from .models import (
    Infeasible,
    SequentialDesign,
    Solution,
    assemble_metrics,
    check_profiles,
    default_bias,
    or_fusion,
)
from .seq_relaxed import NumericalInstabilityError, rate

MAX_TRUNCATION = 30
PROB_SLACK = 1e-9


class StructuralError(ValueError):
    """Index configuration outside every documented knot-vector regime."""


@dataclass(frozen=True)
class FBasis:
    """Coefficients of the order-k volume polynomial for nondecreasing knots."""

    knots: tuple
    coeffs: tuple

    @classmethod
    def build(cls, knots):
        knots = tuple(float(k) for k in knots)
        if any(b < a for a, b in zip(knots, knots[1:])):
            raise ValueError("knots must be nondecreasing")
        if knots and knots[0] < 0.0:
            raise ValueError("knots must be nonnegative")
        return cls(knots, tuple(f_coefficients(np.array(knots, dtype=float))))

    @property
    def order(self):
        return len(self.knots)


def f_eval(basis, zeta, order=None):
    """Evaluate the order-k polynomial (default k = number of knots) at zeta.

    For zeta at or above the last knot this is the volume of
    {knots_i <= z_i, z_1 <= ... <= z_k <= zeta}; order 0 is identically 1.
    """
    k = basis.order if order is None else order
    if k == 0:
        return 1.0
    return f_value(np.array(basis.knots), np.array(basis.coeffs), k, zeta)


# -- boundary bookkeeping -------------------------------------------------------


def _lower_ext(design, j):
    """a_j for any j >= 1 (the affine boundary continues past the horizon)."""
    raw = design.a_bar + j * design.bias
    return 0.0 if j <= design.p else raw


def _upper_ext(design, j):
    return design.b_bar + j * design.bias


def q_index(design):
    """Largest j with a_j <= b_1; steps n <= q + 1 only meet the shifted simplex."""
    return int(math.floor((design.b_bar - design.a_bar) / design.bias)) + 1


def s_index(design, c):
    """Smallest s >= 0 with c <= b_{s+1}, i.e. b_s < c <= b_{s+1}."""
    return max(0, int(math.ceil((c - design.b_bar) / design.bias)) - 1)


def psi_vector(n, i, c, design):
    """Knot vector for z_{i+1}..z_n given a first upper crossing at step i+1.

    ``c`` replaces a_n as the last lower limit. Three regimes: some a_j
    still exceed b_{i+1}; only c does; none do.
    """
    if not 0 <= i <= n - 2:
        raise StructuralError(f"need 0 <= i <= n-2, got i={i}, n={n}")
    if c < _lower_ext(design, n - 1) - 1e-12:
        raise StructuralError(f"c={c} lies below a_(n-1)")
    q = q_index(design)
    s = s_index(design, c)
    b = _upper_ext(design, i + 1)
    if 0 <= i <= n - q - 2:
        head = [b] * q
        mid = [_lower_ext(design, j) for j in range(q + i + 1, n)]
        return np.array(head + mid + [c])
    if n - q - 1 <= i <= s - 1:
        return np.array([b] * (n - i - 1) + [c])
    if s <= i <= n - 2:
        return np.full(n - i, b)
    raise StructuralError(f"no knot regime for n={n}, i={i}, q={q}, s={s}")


def _check(design):
    if design.n_trunc > MAX_TRUNCATION:
        raise ValueError(
            f"n_trunc {design.n_trunc} exceeds {MAX_TRUNCATION} for double-threshold analytics"
        )


def _arrays(design):
    return design.lower(), design.upper(), design.p, min(q_index(design), design.n_trunc + 1)


def j_fn(n, theta, design, volumes=None):
    """J_n(theta) = integral over the step-n continuation region of exp(-theta z_n).

    Pr(R_n) = theta^n J_n(theta); for n = 1 this is
    (exp(-theta a_1) - exp(-theta b_1)) / theta.
    """
    _check(design)
    if not theta > 0:
        raise ValueError("theta must be positive")
    lower, upper, p, q = _arrays(design)
    if volumes is None:
        volumes = general_table(lower, upper, p, q, [theta])[0]
    return continuation_prob(lower, upper, volumes, n, theta) / theta**n


@dataclass
class CrossingTable:
    """Per-step crossing and continuation probabilities for one design.

    Index n-1 holds step n. ``*_h1`` arrays are for the SNR given to
    ``crossing_probs``.
    """

    volumes: np.ndarray
    upper_h0: np.ndarray
    upper_h1: np.ndarray
    cont_h0: np.ndarray
    cont_h1: np.ndarray
    lower_h0: np.ndarray
    lower_h1: np.ndarray


def _lower_mass(upper_hit, cont):
    prev = np.concatenate([[1.0], cont[:-1]])
    return prev - cont - upper_hit


def _validate(*arrays):
    for arr in arrays:
        if np.any(arr < -PROB_SLACK) or np.any(arr > 1.0 + PROB_SLACK):
            raise NumericalInstabilityError(
                f"probability mass outside [0, 1]: min {arr.min():.3g}, max {arr.max():.3g}"
            )


def _tables(design, thetas):
    _check(design)
    lower, upper, p, q = _arrays(design)
    vol, up, cont = general_table(lower, upper, p, q, thetas)
    low = np.array([_lower_mass(up[h], cont[h]) for h in range(len(thetas))])
    _validate(up, cont, low, np.cumsum(up, axis=1))
    return vol, up, cont, low


def crossing_probs(design, gamma):
    vol, up, cont, low = _tables(design, [rate(), rate(gamma)])
    return CrossingTable(vol, up[0], up[1], cont[0], cont[1], low[0], low[1])


def seq_metrics_general(profiles, network, design):
    check_profiles(profiles, network)
    gammas = sorted({p.gamma for p in profiles})
    _, up, cont, _ = _tables(design, [rate()] + [rate(g) for g in gammas])
    by_gamma = {g: h + 1 for h, g in enumerate(gammas)}
    idx = [by_gamma[p.gamma] for p in profiles]
    pf = math.fsum(up[0])
    pd = np.array([math.fsum(up[h]) for h in idx])
    e0 = 1.0 + math.fsum(cont[0, :-1])
    e1 = np.array([1.0 + math.fsum(cont[h, :-1]) for h in idx])
    return assemble_metrics(pf, pd, cont[0, -1], cont[idx, -1], e0, e1, profiles, network)


# -- two-dimensional search -------------------------------------------------------


def _evaluate(n_trunc, a_bar, b_bar, bias, profiles, network):
    m = seq_metrics_general(profiles, network, SequentialDesign(n_trunc, a_bar, b_bar, bias))
    return m.qf, m.qd, m.max_cost


B_MIN = 1e-9


def _column_bracket(n_trunc, a_bar, bias, profiles, network, xtol):
    def qfqd(b):
        qf, qd, _ = _evaluate(n_trunc, a_bar, b, bias, profiles, network)
        return qf, qd

    qd_floor = qfqd(B_MIN)[1]
    if qd_floor < network.beta:
        return None, {"qd_at_b_min": qd_floor}
    hi = max(1.0, 2.0 * n_trunc * bias)
    while qfqd(hi)[1] >= network.beta:
        hi *= 2.0
    lo = B_MIN
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if qfqd(mid)[1] >= network.beta:
            lo = mid
        else:
            hi = mid
    b_hi = lo
    if qfqd(B_MIN)[0] <= network.alpha:
        return (B_MIN, b_hi), {}
    lo, hi = B_MIN, max(b_hi, 1.0)
    while qfqd(hi)[0] > network.alpha:
        hi *= 2.0
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if qfqd(mid)[0] <= network.alpha:
            hi = mid
        else:
            lo = mid
    if hi > b_hi:
        return None, {"qf_at_b_hi": qfqd(b_hi)[0], "qd_at_b_lo": qfqd(hi)[1]}
    return (hi, b_hi), {}


@dataclass
class GridAudit:
    """Every evaluated grid cell, for auditing the 2-D optimum."""

    a_bar: np.ndarray
    b_bar: np.ndarray
    qf: np.ndarray
    qd: np.ndarray
    max_cost: np.ndarray
    feasible: np.ndarray

    def pareto(self):
        """Feasible cells not dominated in (max_cost, -qd)."""
        idx = np.flatnonzero(self.feasible)
        keep = []
        for k in idx:
            dominated = np.any(
                (self.max_cost[idx] <= self.max_cost[k])
                & (self.qd[idx] >= self.qd[k])
                & ((self.max_cost[idx] < self.max_cost[k]) | (self.qd[idx] > self.qd[k]))
            )
            if not dominated:
                keep.append(k)
        return np.array(keep, dtype=int)


def optimize_2d(profiles, network, n_trunc, bias=None, grid_resolution=200, xtol=1e-10):
    """Exhaustive search over a_bar in [-N*bias, 0) and a per-column b_bar bracket.

    For each a_bar the feasible b_bar form an interval (Q_F and Q_D both
    decrease in b_bar); its ends are found by bisection and the interval is
    sampled on ``grid_resolution`` points. Constraints are re-checked at
    every cell; ties in max cost go to the lexicographically smallest
    (a_bar, b_bar).
    """
    check_profiles(profiles, network)
    if grid_resolution < 2:
        raise ValueError("grid_resolution must be at least 2")
    if n_trunc > MAX_TRUNCATION:
        raise ValueError(f"n_trunc {n_trunc} exceeds {MAX_TRUNCATION}")
    gamma_min = min(p.gamma for p in profiles)
    if bias is None:
        bias = default_bias(gamma_min)
    if not 1.0 < bias < 1.0 + gamma_min:
        raise ValueError(f"bias {bias!r} outside (1, 1 + gamma_min)")

    span = n_trunc * bias
    a_grid = -span + span * np.arange(grid_resolution) / grid_resolution
    rows = []
    # closest approach to feasibility over columns with an empty bracket
    near = {}
    for a_bar in a_grid:
        br, diag = _column_bracket(n_trunc, a_bar, bias, profiles, network, xtol)
        if br is None:
            for key, v in diag.items():
                best = min if key == "qf_at_b_hi" else max
                near[key] = best(near.get(key, v), v)
            continue
        for b_bar in np.unique(np.linspace(br[0], br[1], grid_resolution)):
            qf, qd, cost = _evaluate(n_trunc, a_bar, b_bar, bias, profiles, network)
            rows.append((a_bar, b_bar, qf, qd, cost))

    if not rows:
        return Infeasible(
            "seq-general",
            "no a_bar column admits b_bar with Q_F <= alpha and Q_D >= beta",
            {"a_columns": int(grid_resolution), **near},
        )
    arr = np.array(rows)
    feasible = (arr[:, 2] <= network.alpha) & (arr[:, 3] >= network.beta)
    audit = GridAudit(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4], feasible)
    if not feasible.any():
        margin = np.minimum(network.alpha - arr[:, 2], arr[:, 3] - network.beta)
        k = int(np.argmax(margin))
        return Infeasible(
            "seq-general",
            "no grid cell satisfies both constraints",
            {"best_margin": float(margin[k]), "qf": float(arr[k, 2]), "qd": float(arr[k, 3])},
        )
    order = np.lexsort((arr[:, 1], arr[:, 0], np.where(feasible, arr[:, 4], np.inf)))
    best = int(order[0])
    design = SequentialDesign(n_trunc, float(arr[best, 0]), float(arr[best, 1]), bias)
    metrics = seq_metrics_general(profiles, network, design)
    return Solution("seq-general", design, metrics, {"audit": audit})
