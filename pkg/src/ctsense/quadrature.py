"""Brute-force nested quadrature over the ordered partial sums z_1 <= ... <= z_n.

Independent of the closed forms: it integrates the joint density
``theta^n exp(-theta z_n)`` of the partial sums directly, one adaptive
``scipy.integrate.quad`` per dimension. Practical for n <= 4.
"""

import math

from scipy.integrate import quad

_OPTS = dict(epsabs=1e-13, epsrel=1e-11, limit=200)


def _integrate(fn, lo, hi, kinks=()):
    if hi <= lo:
        return 0.0
    pts = [k for k in kinks if lo < k < hi]
    return quad(fn, lo, hi, points=pts or None, **_OPTS)[0]


def _region(lower, upper, depth, last):
    """Integrate ``last(z_depth)`` over z_1..z_depth inside the boundaries."""

    def level(k, z_prev):
        lo = max(lower[k], z_prev)
        hi = upper[k]
        if k == depth - 1:
            return _integrate(last, lo, hi)
        kinks = [lower[j] for j in range(k + 1, depth)]
        return _integrate(lambda z: level(k + 1, z), lo, hi, kinks)

    if depth == 0:
        return last(0.0)
    return level(0, 0.0)


def continuation(lower, upper, n, theta):
    """Pr(z_i in (a_i, b_i), i <= n) at rate theta."""
    return _region(lower, upper, n, lambda z: theta**n * math.exp(-theta * z))


def upper_crossing(lower, upper, n, theta):
    """Pr(inside through step n-1, z_n >= b_n)."""
    bn = upper[n - 1]

    def tail(z):
        # integral_{b_n}^inf theta^n exp(-theta z_n) dz_n, done numerically
        return quad(lambda t: theta**n * math.exp(-theta * t), max(bn, z), math.inf, **_OPTS)[0]

    return _region(lower, upper, n - 1, tail)


def volume(lower, upper, n):
    """A(n): Lebesgue volume of the step-(n-1) continuation region."""
    return _region(lower, upper, n - 1, lambda z: 1.0)
