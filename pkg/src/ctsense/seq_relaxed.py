"""Truncated sequential sensing with a zero lower boundary.

With ``a_bar <= -N * bias`` every lower boundary a_1..a_N is 0 and, since
the increments are a.s. positive, a radio either crosses the upper
boundary (sends 1) or stays silent at the horizon. All quantities then
reduce to partial sums of ``theta^(n-1) exp(-theta b_n) A(n)`` with
``A(n) = b_1 b_n^(n-2) / (n-1)!``.

Functions accept a scalar ``b_bar`` or an array of them (grid scans).
"""

import math

import numpy as np
from scipy.special import gammaln

from .kernels import kahan_cumsum
from .models import (
    Infeasible,
    SequentialDesign,
    Solution,
    assemble_metrics,
    check_profiles,
    default_bias,
    or_fusion,
)

MAX_TRUNCATION = 150
PROB_SLACK = 1e-9


class NumericalInstabilityError(ArithmeticError):
    """Accumulated probability mass left [0, 1] beyond rounding slack."""


def _check(design):
    if design.n_trunc > MAX_TRUNCATION:
        raise ValueError(f"n_trunc {design.n_trunc} exceeds the supported {MAX_TRUNCATION}")
    if not design.is_relaxed:
        raise ValueError(
            "lower boundary is not identically zero (a_bar > -N*bias); use seq_general"
        )


def rate(gamma=None):
    """Exponential rate of x = |r|^2 / sigma_w^2: 1/2 under H0, 1/(2(1+gamma)) under H1."""
    return 0.5 if gamma is None else 0.5 / (1.0 + gamma)


def boundaries(design):
    _check(design)
    return np.zeros(design.n_trunc), design.upper()


def _upper_grid(n_trunc, b_bar, bias):
    b_bar = np.atleast_1d(np.asarray(b_bar, dtype=float))
    n = np.arange(1, n_trunc + 1, dtype=float)
    return b_bar[:, None] + n[None, :] * bias


def _log_volumes(b):
    """log A(n) for rows of upper boundaries b[:, n-1]."""
    n_trunc = b.shape[1]
    n = np.arange(1, n_trunc + 1, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.log(b[:, :1]) + (n - 2.0) * np.log(b) - gammaln(n)
    out[:, 0] = 0.0
    return out


def a_volume(n, upper):
    """A(n) = b_1 b_n^(n-2) / (n-1)! for a 1-based step index n."""
    if n == 1:
        return 1.0
    return upper[0] * upper[n - 1] ** (n - 2) / math.factorial(n - 1)


def crossing_terms(n_trunc, b_bar, bias, theta):
    """Pr(first upper crossing at step n), rows = b_bar values, cols = n."""
    b = _upper_grid(n_trunc, b_bar, bias)
    n = np.arange(1, n_trunc + 1, dtype=float)
    logt = (n - 1.0) * math.log(theta) - theta * b + _log_volumes(b)
    return np.exp(logt)


def partial_sums(n_trunc, b_bar, bias, theta):
    s = kahan_cumsum(crossing_terms(n_trunc, b_bar, bias, theta))
    if np.any(s > 1.0 + PROB_SLACK):
        raise NumericalInstabilityError(
            f"crossing probabilities sum to {s.max():.17g} > 1; N or b_bar outside the stable range"
        )
    return np.minimum(s, 1.0)


def _scalar(x, b_bar):
    return float(x[0]) if np.ndim(b_bar) == 0 else x


def local_pf_seq(design):
    _check(design)
    s = partial_sums(design.n_trunc, design.b_bar, design.bias, rate())
    return float(s[0, -1])


def local_pd_seq(design, gamma):
    _check(design)
    s = partial_sums(design.n_trunc, design.b_bar, design.bias, rate(gamma))
    return float(s[0, -1])


def pr_continue(n, design, hypothesis, gamma=None):
    """Pr(R_n | H_k): the statistic stays inside the boundaries through step n."""
    _check(design)
    if not 1 <= n <= design.n_trunc:
        raise ValueError(f"step index {n} outside 1..{design.n_trunc}")
    theta = rate() if hypothesis == 0 else rate(gamma)
    s = partial_sums(design.n_trunc, design.b_bar, design.bias, theta)
    return float(1.0 - s[0, n - 1])


def _asn_from_sums(s):
    # E[N] = 1 + sum_{n=1}^{N-1} Pr(R_n)
    return 1.0 + np.sum(1.0 - s[:, :-1], axis=1)


def asn(design, gamma, pi0):
    """(E[N|H0], E[N|H1], pi0 E[N|H0] + pi1 E[N|H1])."""
    _check(design)
    s0 = partial_sums(design.n_trunc, design.b_bar, design.bias, rate())
    s1 = partial_sums(design.n_trunc, design.b_bar, design.bias, rate(gamma))
    e0 = float(_asn_from_sums(s0)[0])
    e1 = float(_asn_from_sums(s1)[0])
    return e0, e1, pi0 * e0 + (1.0 - pi0) * e1


def censor_rate_seq(design, gamma, pi0):
    """(delta0, delta1, rho); the zero lower boundary is never hit."""
    _check(design)
    d0 = 1.0 - local_pf_seq(design)
    d1 = 1.0 - local_pd_seq(design, gamma)
    return d0, d1, pi0 * d0 + (1.0 - pi0) * d1


def cost_seq(profile, design, pi0):
    _, _, nbar = asn(design, profile.gamma, pi0)
    _, _, rho = censor_rate_seq(design, profile.gamma, pi0)
    return nbar * profile.cost_sense + (1.0 - rho) * profile.cost_tx


def seq_metrics(profiles, network, design):
    check_profiles(profiles, network)
    _check(design)
    n, bb, lb = design.n_trunc, design.b_bar, design.bias
    s0 = partial_sums(n, bb, lb, rate())[0]
    pf = s0[-1]
    pd, e1 = [], []
    for p in profiles:
        s1 = partial_sums(n, bb, lb, rate(p.gamma))[0]
        pd.append(s1[-1])
        e1.append(1.0 + np.sum(1.0 - s1[:-1]))
    pd = np.array(pd)
    e0 = 1.0 + np.sum(1.0 - s0[:-1])
    return assemble_metrics(pf, pd, 1.0 - pf, 1.0 - pd, e0, np.array(e1), profiles, network)


# -- grid evaluation for the optimizer ----------------------------------------


def _grid_quantities(b_bar, n_trunc, bias, profiles, network):
    """Vectorized Q_F, Q_D and max_j C_j over an array of b_bar values."""
    s0 = partial_sums(n_trunc, b_bar, bias, rate())
    pf = s0[:, -1]
    e0 = _asn_from_sums(s0)
    qf = -np.expm1(network.num_sensors * np.log1p(-np.minimum(pf, 1.0)))
    log_miss = np.zeros_like(pf)
    max_cost = np.full_like(pf, -np.inf)
    cache = {}
    for p in profiles:
        if p.gamma not in cache:
            cache[p.gamma] = partial_sums(n_trunc, b_bar, bias, rate(p.gamma))
        s1 = cache[p.gamma]
        pd = s1[:, -1]
        e1 = _asn_from_sums(s1)
        log_miss += np.log1p(-np.minimum(pd, 1.0))
        rho = network.pi0 * (1.0 - pf) + network.pi1 * (1.0 - pd)
        nbar = network.pi0 * e0 + network.pi1 * e1
        max_cost = np.maximum(max_cost, nbar * p.cost_sense + (1.0 - rho) * p.cost_tx)
    qd = -np.expm1(log_miss)
    return qf, qd, max_cost


def _qf(b, n_trunc, bias, profiles, network):
    return _grid_quantities(np.array([b]), n_trunc, bias, profiles, network)[0][0]


def _qd(b, n_trunc, bias, profiles, network):
    return _grid_quantities(np.array([b]), n_trunc, bias, profiles, network)[1][0]


B_MIN = 1e-9


def _bracket(n_trunc, bias, profiles, network, xtol=1e-13):
    """(b_lo, b_hi, diagnostics): Q_F <= alpha for b >= b_lo, Q_D >= beta for b <= b_hi."""
    args = (n_trunc, bias, profiles, network)
    qd_min_b = _qd(B_MIN, *args)
    diag = {"qd_at_b_min": qd_min_b}
    if qd_min_b < network.beta:
        return None, None, diag

    hi = max(1.0, 2.0 * n_trunc * bias)
    while _qd(hi, *args) >= network.beta:
        hi *= 2.0
    lo = B_MIN
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if _qd(mid, *args) >= network.beta:
            lo = mid
        else:
            hi = mid
    b_hi = lo

    if _qf(B_MIN, *args) <= network.alpha:
        b_lo = B_MIN
    else:
        lo, hi = B_MIN, b_hi
        if _qf(hi, *args) > network.alpha:
            hi = max(hi, 1.0)
            while _qf(hi, *args) > network.alpha:
                hi *= 2.0
        while hi - lo > xtol * max(1.0, hi):
            mid = 0.5 * (lo + hi)
            if _qf(mid, *args) <= network.alpha:
                hi = mid
            else:
                lo = mid
        b_lo = hi
    diag.update(b_lo=b_lo, b_hi=b_hi)
    return b_lo, b_hi, diag


def optimize_b(profiles, network, n_trunc, bias=None, grid_points=2000):
    """Line search over b_bar minimizing max_j C_j under the global constraints.

    The feasible set is the interval [b_lo, b_hi] where b_lo solves
    Q_F = alpha and b_hi solves Q_D = beta (both maps decrease in b_bar).
    The max cost is not known to be monotone there, so the interval is
    scanned on ``grid_points`` points plus both ends.
    """
    check_profiles(profiles, network)
    gamma_min = min(p.gamma for p in profiles)
    if bias is None:
        bias = default_bias(gamma_min)
    if not 1.0 < bias < 1.0 + gamma_min:
        raise ValueError(f"bias {bias!r} outside (1, 1 + gamma_min = {1.0 + gamma_min!r})")
    if n_trunc > MAX_TRUNCATION:
        raise ValueError(f"n_trunc {n_trunc} exceeds the supported {MAX_TRUNCATION}")

    b_lo, b_hi, diag = _bracket(n_trunc, bias, profiles, network)
    if b_lo is None:
        return Infeasible(
            "seq-relaxed",
            f"Q_D cannot reach beta={network.beta} at N={n_trunc} even with b_bar -> 0",
            diag,
        )
    if b_lo > b_hi:
        args = (n_trunc, bias, profiles, network)
        diag.update(qf_at_b_hi=_qf(b_hi, *args), qd_at_b_lo=_qd(b_lo, *args))
        return Infeasible(
            "seq-relaxed",
            f"Q_F <= alpha needs b_bar >= {b_lo:.6g} but Q_D >= beta needs b_bar <= {b_hi:.6g}",
            diag,
        )

    grid = np.unique(np.concatenate([np.linspace(b_lo, b_hi, grid_points), [b_lo, b_hi]]))
    qf, qd, max_cost = _grid_quantities(grid, n_trunc, bias, profiles, network)
    ok = (qf <= network.alpha) & (qd >= network.beta)
    if not ok.any():
        return Infeasible("seq-relaxed", "no scanned b_bar met both constraints", diag)
    masked = np.where(ok, max_cost, np.inf)
    best = int(np.argmin(masked))
    design = SequentialDesign.relaxed(n_trunc, float(grid[best]), bias)
    metrics = seq_metrics(profiles, network, design)
    diag["grid_points"] = int(grid.size)
    return Solution("seq-relaxed", design, metrics, diag)
