"""Fixed-sample-size censoring with OR fusion.

Each radio accumulates ``E = sum |r_i|^2 / sigma_w^2`` over N samples,
sends 1 if ``E >= lambda2``, sends 0 if ``E <= lambda1`` and stays silent
otherwise. ``E`` is chi-square with 2N degrees of freedom, scaled by 1
under H0 and by (1 + gamma) under H1.
"""

import math

import numpy as np

from .models import (
    FixedSizeDesign,
    Infeasible,
    Solution,
    assemble_metrics,
    check_profiles,
    or_fusion,
)
from .special import inv_reg_upper_gamma, reg_upper_gamma

PF_BRACKET = (1e-12, 1.0 - 1e-12)


def _tail(n, x):
    return 0.0 if math.isinf(x) else reg_upper_gamma(n, x)


def local_pf(design):
    return _tail(design.n_samples, design.lambda2 / 2.0)


def local_pd(design, gamma):
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    return _tail(design.n_samples, design.lambda2 / (2.0 * (1.0 + gamma)))


def censor_deltas(design, gamma):
    """Probabilities of the silent region under H0 and H1."""
    n = design.n_samples
    s1 = 2.0 * (1.0 + gamma)
    d0 = _tail(n, design.lambda1 / 2.0) - _tail(n, design.lambda2 / 2.0)
    d1 = _tail(n, design.lambda1 / s1) - _tail(n, design.lambda2 / s1)
    return max(d0, 0.0), max(d1, 0.0)


def scheme_metrics(profiles, network, design):
    check_profiles(profiles, network)
    pf = local_pf(design)
    pd = np.array([local_pd(design, p.gamma) for p in profiles])
    deltas = np.array([censor_deltas(design, p.gamma) for p in profiles])
    n = float(design.n_samples)
    return assemble_metrics(pf, pd, deltas[:, 0], deltas[:, 1], n, n, profiles, network)


def _qd_at_lambda2(lam2, n, gammas):
    pd = [_tail(n, lam2 / (2.0 * (1.0 + g))) for g in gammas]
    return or_fusion(pd)


def _bisect_decreasing(fn, target, lo, hi, xtol):
    """Largest-ish x in [lo, hi] with fn(x) >= target, fn nonincreasing.

    Returns the left end of the final bracket, so fn(result) >= target.
    """
    for _ in range(400):
        if hi - lo <= xtol * max(1.0, abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        if fn(mid) >= target:
            lo = mid
        else:
            hi = mid
    return lo


def lambda2_for_qd(n, gammas, beta):
    """Shared upper threshold with Q_D = beta, by bisection on lambda2."""
    # Q_D is decreasing in lambda2 and equals 1 at lambda2 = 0
    hi = 2.0 * (1.0 + max(gammas)) * inv_reg_upper_gamma(n, PF_BRACKET[0])
    while _qd_at_lambda2(hi, n, gammas) > beta:
        hi *= 2.0
    return _bisect_decreasing(lambda x: _qd_at_lambda2(x, n, gammas), beta, 0.0, hi, 1e-15)


def lambda2_equal_snr(n, gamma, num_sensors, beta):
    """Closed form for equal SNRs: per-sensor P_d = 1 - (1 - beta)^(1/M)."""
    pd = -math.expm1(math.log1p(-beta) / num_sensors)
    return 2.0 * (1.0 + gamma) * inv_reg_upper_gamma(n, pd), pd


def optimize_censoring(profiles, network, n_samples, method="auto"):
    """Minimize max_j C_j subject to Q_F <= alpha and Q_D >= beta.

    The lower threshold is 0 at the optimum, and the cost is increasing in
    the shared P_f, so the optimum sits at the smallest P_f meeting the
    detection floor. ``method`` is "closed-form" (equal SNRs only),
    "bisection", or "auto" (closed form when all SNRs agree).
    """
    check_profiles(profiles, network)
    gammas = [p.gamma for p in profiles]
    equal = all(g == gammas[0] for g in gammas)
    if method == "auto":
        method = "closed-form" if equal else "bisection"
    if method == "closed-form":
        if not equal:
            raise ValueError("closed form requires equal SNRs")
        lam2, pd_target = lambda2_equal_snr(n_samples, gammas[0], network.num_sensors, network.beta)
    elif method == "bisection":
        lam2 = lambda2_for_qd(n_samples, gammas, network.beta)
        pd_target = None
    else:
        raise ValueError(f"unknown method {method!r}")

    pf_star = _tail(n_samples, lam2 / 2.0)
    pf_bound = network.pf_ceiling
    margins = {
        "pf_required": pf_star,
        "pf_bound": pf_bound,
        "qf_at_required": or_fusion(np.full(network.num_sensors, pf_star)),
        "alpha": network.alpha,
    }
    if pf_star > pf_bound:
        return Infeasible(
            "censoring",
            f"P_f needed for Q_D >= beta is {pf_star:.6g} > alpha bound {pf_bound:.6g}",
            margins,
        )
    design = FixedSizeDesign(n_samples, 0.0, lam2)
    metrics = scheme_metrics(profiles, network, design)
    extra = {"pf_star": pf_star, "pf_bound": pf_bound}
    if pd_target is not None:
        extra["pd_target"] = pd_target
    return Solution("censoring", design, metrics, extra)
