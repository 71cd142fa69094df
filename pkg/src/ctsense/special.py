"""Regularized upper incomplete gamma function for integer shape, and its inverse."""

import math
import numbers

from scipy import special as _sc


def _check_shape(a):
    if isinstance(a, bool) or not isinstance(a, numbers.Integral):
        raise ValueError(f"shape must be a positive integer, got {a!r}")
    if a < 1:
        raise ValueError(f"shape must be a positive integer, got {a!r}")
    return int(a)


def reg_upper_gamma(a, x):
    """Q(a, x) = Gamma(a, x) / Gamma(a) for integer ``a >= 1`` and ``x >= 0``."""
    a = _check_shape(a)
    if not x >= 0:
        raise ValueError(f"x must be nonnegative, got {x!r}")
    if math.isinf(x):
        return 0.0
    return float(_sc.gammaincc(a, x))


def _bracket_hi(a):
    return a + 40.0 * math.sqrt(a) + 40.0


def inv_reg_upper_gamma(a, q):
    """Return x >= 0 with ``reg_upper_gamma(a, x) == q``.

    Safeguarded Newton iteration inside a shrinking bisection bracket
    ``[0, a + 40 sqrt(a) + 40]``; the bracket encloses the root for
    ``q >= 1e-12``. Smaller ``q`` extends the bracket by doubling.
    """
    a = _check_shape(a)
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q must lie in (0, 1], got {q!r}")
    if q == 1.0:
        return 0.0

    lo, hi = 0.0, _bracket_hi(a)
    while _sc.gammaincc(a, hi) > q:
        lo, hi = hi, 2.0 * hi
    log_norm = math.lgamma(a)
    x = 0.5 * (lo + hi)
    for _ in range(300):
        fx = _sc.gammaincc(a, x) - q
        if fx == 0.0:
            return x
        # Q is decreasing in x
        if fx > 0.0:
            lo = x
        else:
            hi = x
        log_dens = (a - 1) * math.log(x) - x - log_norm if x > 0.0 else -math.inf
        step_ok = False
        if log_dens > -700.0:
            x_new = x + fx / math.exp(log_dens)
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 4e-16 * max(x, 1e-300) or hi - lo <= 4e-16 * hi:
            return x_new
        x = x_new
    return x
