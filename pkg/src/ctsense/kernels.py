"""Hot loops: compensated prefix sums, Monte Carlo trial classification, and
the double-threshold volume / continuation recursions.

Every kernel has a numba-compiled path and a numpy path. The numpy path is
either a vectorized rewrite (prefix sums, Monte Carlo) or the same loop
code run uncompiled (the volume recursion, which has no useful vector form).
"""

import math

import numpy as np

from ._accel import HAS_NUMBA, njit

# Monte Carlo outcome codes, per trial
CENSOR = 0
SEND1 = 1
SEND0 = 2


# -- compensated prefix sums ---------------------------------------------------


@njit
def _kahan_cumsum_jit(x):
    rows, cols = x.shape
    out = np.empty_like(x)
    for r in range(rows):
        s = 0.0
        c = 0.0
        for k in range(cols):
            y = x[r, k] - c
            t = s + y
            c = (t - s) - y
            s = t
            out[r, k] = s
    return out


def _kahan_cumsum_np(x):
    out = np.empty_like(x)
    s = np.zeros(x.shape[0])
    c = np.zeros(x.shape[0])
    for k in range(x.shape[1]):
        y = x[:, k] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[:, k] = s
    return out


def kahan_cumsum(x):
    """Row-wise compensated cumulative sum of a 2-D float array."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if HAS_NUMBA:
        return _kahan_cumsum_jit(x)
    return _kahan_cumsum_np(x)


# -- Monte Carlo ---------------------------------------------------------------


@njit
def _classify_sequential_jit(u, scale, lower, upper, outcome, stop):
    trials, n = u.shape
    for t in range(trials):
        z = 0.0
        outcome[t] = CENSOR
        stop[t] = n
        for k in range(n):
            z += -scale * math.log1p(-u[t, k])
            if z >= upper[k]:
                outcome[t] = SEND1
                stop[t] = k + 1
                break
            if z <= lower[k]:
                outcome[t] = SEND0
                stop[t] = k + 1
                break


def _classify_sequential_np(u, scale, lower, upper, outcome, stop):
    n = u.shape[1]
    z = np.cumsum(-scale * np.log1p(-u), axis=1)
    hit_up = z >= upper
    hit_lo = z <= lower
    hit = hit_up | hit_lo
    any_hit = hit.any(axis=1)
    first = np.argmax(hit, axis=1)
    rows = np.arange(u.shape[0])
    up_first = hit_up[rows, first]
    outcome[:] = np.where(any_hit, np.where(up_first, SEND1, SEND0), CENSOR)
    stop[:] = np.where(any_hit, first + 1, n)


def classify_sequential(u, scale, lower, upper):
    """Run the truncated two-boundary test on rows of uniforms.

    Increments are ``-scale * log(1 - u)`` (exponential, mean ``scale``).
    Returns per-trial outcome codes and stopping times (1-based).
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    lower = np.ascontiguousarray(lower, dtype=np.float64)
    upper = np.ascontiguousarray(upper, dtype=np.float64)
    outcome = np.empty(u.shape[0], dtype=np.int8)
    stop = np.empty(u.shape[0], dtype=np.int64)
    if HAS_NUMBA:
        _classify_sequential_jit(u, float(scale), lower, upper, outcome, stop)
    else:
        _classify_sequential_np(u, float(scale), lower, upper, outcome, stop)
    return outcome, stop


@njit
def _classify_fixed_jit(u, scale, lam1, lam2, outcome):
    trials, n = u.shape
    for t in range(trials):
        e = 0.0
        for k in range(n):
            e += -scale * math.log1p(-u[t, k])
        if e >= lam2:
            outcome[t] = SEND1
        elif e <= lam1:
            outcome[t] = SEND0
        else:
            outcome[t] = CENSOR


def classify_fixed(u, scale, lam1, lam2):
    """Three-region censoring rule on the accumulated energy of each row."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    outcome = np.empty(u.shape[0], dtype=np.int8)
    if HAS_NUMBA:
        _classify_fixed_jit(u, float(scale), float(lam1), float(lam2), outcome)
    else:
        e = np.sum(-scale * np.log1p(-u), axis=1)
        outcome[:] = np.where(e >= lam2, SEND1, np.where(e <= lam1, SEND0, CENSOR))
    return outcome


# -- double-threshold recursions -----------------------------------------------
#
# Notation (1-based in comments, 0-based in arrays): lower[k] = a_{k+1},
# upper[k] = b_{k+1}. F(eta; z) is the volume of
# {eta_i <= z_i, z_1 <= ... <= z_m <= z}, a piecewise-free polynomial in z
# built from the coefficient recursion in _f_coeffs.


@njit
def _f_coeffs(eta, m, coef):
    """Fill coef[0..m] for the knot prefix eta[0..m-1]."""
    coef[0] = 1.0
    for j in range(1, m + 1):
        acc = 0.0
        comp = 0.0
        for i in range(j):
            d = eta[j - 1] - eta[i]
            term = -coef[i] * d ** (j - i) / math.gamma(j - i + 1.0)
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        coef[j] = acc


@njit
def _f_eval(eta, coef, j, z):
    """F of order j (knots eta[0..j-1]) at z, from precomputed coefficients."""
    acc = coef[j]
    comp = 0.0
    for i in range(j):
        term = coef[i] * (z - eta[i]) ** (j - i) / math.gamma(j - i + 1.0)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


@njit
def _psi_fill(lower, upper, i, m, c, out):
    """Knots for the suffix z_{i+1}..z_m after a first upper crossing at i+1.

    Entry for z_j is max(a_j, b_{i+1}); the final entry uses ``c`` in place
    of a_m. Returns the length m - i.
    """
    bi = upper[i]
    length = m - i
    for r in range(length):
        j = i + r  # 0-based index of z_{i+1+r}
        lo = c if r == length - 1 else lower[j]
        out[r] = lo if lo > bi else bi
    return length


@njit
def _exp_poly_integral(eta, coef, m, lo, hi, theta, scale_pow):
    """theta^scale_pow * integral_lo^hi exp(-theta z) F_m(eta; z) dz.

    Repeated integration by parts along the derivative chain F_m' = F_{m-1}.
    """
    if hi <= lo:
        return 0.0
    elo = math.exp(-theta * lo)
    ehi = math.exp(-theta * hi)
    acc = 0.0
    comp = 0.0
    for i in range(1, m + 2):
        order = m + 1 - i
        flo = _f_eval(eta, coef, order, lo)
        fhi = _f_eval(eta, coef, order, hi)
        term = theta ** (scale_pow - i) * (flo * elo - fhi * ehi)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


@njit
def _volumes(lower, upper, p, q, out):
    """A(n), n = 1..N: volume of the continuation region for z_1..z_{n-1}.

    Three branches: closed form while the lower boundary is still zero
    (n <= p + 1), the shifted-simplex subtraction while every a_j stays
    below b_1 (n <= q + 1), and the general knot-vector subtraction beyond.
    """
    n_max = lower.shape[0]
    eta = np.empty(n_max + 1)
    coef = np.empty(n_max + 2)
    out[0] = 1.0
    for n in range(2, n_max + 1):
        bn1 = upper[n - 2]
        if n <= p + 1:
            out[n - 1] = upper[0] * upper[n - 1] ** (n - 2) / math.gamma(n)
            continue
        m = n - 1
        for k in range(m):
            eta[k] = lower[k]
        _f_coeffs(eta, m, coef)
        acc = _f_eval(eta, coef, m, bn1)
        comp = 0.0
        for i in range(n - 2):  # first upper crossing at step i + 1 <= n - 2
            if n <= q + 1:
                d = bn1 - upper[i]
                vol = d ** (n - 1 - i) / math.gamma(n - i)
            else:
                length = _psi_fill(lower, upper, i, m, lower[m - 1], eta)
                _f_coeffs(eta, length, coef)
                vol = _f_eval(eta, coef, length, bn1)
            term = -out[i] * vol
            y = term - comp
            t = acc + y
            comp = (t - acc) - y
            acc = t
        out[n - 1] = acc


@njit
def _continuation(lower, upper, vol, n, theta):
    """Pr(z_i in (a_i, b_i) for all i <= n) at exponential rate theta."""
    n_max = lower.shape[0]
    eta = np.empty(n_max + 1)
    coef = np.empty(n_max + 2)
    m = n - 1
    for k in range(m):
        eta[k] = lower[k]
    _f_coeffs(eta, m, coef)
    an = lower[n - 1]
    bn = upper[n - 1]
    acc = _exp_poly_integral(eta, coef, m, an, bn, theta, n)
    comp = 0.0
    for k in range(n - 1):  # first upper crossing at step k + 1 <= n - 1
        length = _psi_fill(lower, upper, k, m, lower[m - 1], eta)
        _f_coeffs(eta, length, coef)
        lo = an if an > upper[k] else upper[k]
        term = -vol[k] * _exp_poly_integral(eta, coef, length, lo, bn, theta, n)
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


@njit
def _general_table_kernel(lower, upper, p, q, thetas, vol, upper_hit, cont):
    n_max = lower.shape[0]
    _volumes(lower, upper, p, q, vol)
    for h in range(thetas.shape[0]):
        th = thetas[h]
        for n in range(1, n_max + 1):
            upper_hit[h, n - 1] = th ** (n - 1) * math.exp(-th * upper[n - 1]) * vol[n - 1]
            cont[h, n - 1] = _continuation(lower, upper, vol, n, th)


def general_table(lower, upper, p, q, thetas):
    """Volumes A(n), upper-crossing Pr(E_n) and continuation Pr(R_n) per rate.

    Returns ``(vol[N], upper_hit[H, N], cont[H, N])`` for the H rates in
    ``thetas`` (1/2 under H0, 1/(2(1+gamma)) under H1).
    """
    lower = np.ascontiguousarray(lower, dtype=np.float64)
    upper = np.ascontiguousarray(upper, dtype=np.float64)
    thetas = np.ascontiguousarray(np.atleast_1d(thetas), dtype=np.float64)
    n = lower.shape[0]
    vol = np.empty(n)
    upper_hit = np.empty((thetas.shape[0], n))
    cont = np.empty((thetas.shape[0], n))
    _general_table_kernel(lower, upper, int(p), int(q), thetas, vol, upper_hit, cont)
    return vol, upper_hit, cont


def f_coefficients(eta):
    eta = np.ascontiguousarray(eta, dtype=np.float64)
    coef = np.empty(eta.shape[0] + 1)
    _f_coeffs(eta, eta.shape[0], coef)
    return coef


def f_value(eta, coef, order, z):
    return _f_eval(np.ascontiguousarray(eta, dtype=np.float64), coef, int(order), float(z))


def continuation_prob(lower, upper, vol, n, theta):
    return _continuation(
        np.ascontiguousarray(lower, dtype=np.float64),
        np.ascontiguousarray(upper, dtype=np.float64),
        np.ascontiguousarray(vol, dtype=np.float64),
        int(n),
        float(theta),
    )
