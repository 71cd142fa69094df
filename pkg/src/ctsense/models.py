"""Domain types shared by the fixed-size and sequential schemes."""

from dataclasses import dataclass, field
import math

import numpy as np


def db_to_linear(snr_db):
    return 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)


@dataclass(frozen=True)
class SensorProfile:
    """One cognitive radio: linear SNR and per-sample / per-bit energy costs."""

    gamma: float
    cost_sense: float = 1.0
    cost_tx: float = 10.0

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if not self.cost_sense >= 0 or not self.cost_tx >= 0:
            raise ValueError("energy costs must be nonnegative")

    @classmethod
    def from_db(cls, snr_db, cost_sense=1.0, cost_tx=10.0):
        return cls(float(db_to_linear(snr_db)), cost_sense, cost_tx)


@dataclass(frozen=True)
class NetworkModel:
    num_sensors: int
    pi0: float
    alpha: float
    beta: float

    def __post_init__(self):
        if int(self.num_sensors) != self.num_sensors or self.num_sensors < 1:
            raise ValueError(f"num_sensors must be a positive integer, got {self.num_sensors!r}")
        for name in ("pi0", "alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")

    @property
    def pi1(self):
        return 1.0 - self.pi0

    @property
    def pf_ceiling(self):
        """Largest common local P_f with 1 - (1 - P_f)^M <= alpha."""
        return -math.expm1(math.log1p(-self.alpha) / self.num_sensors)

    @property
    def pd_floor_equal(self):
        """Common local P_d with 1 - (1 - P_d)^M = beta."""
        return -math.expm1(math.log1p(-self.beta) / self.num_sensors)


def uniform_profiles(num_sensors, gamma, cost_sense=1.0, cost_tx=10.0):
    return [SensorProfile(gamma, cost_sense, cost_tx) for _ in range(num_sensors)]


def check_profiles(profiles, network):
    if len(profiles) == 0:
        raise ValueError("profiles must be nonempty")
    if len(profiles) != network.num_sensors:
        raise ValueError(
            f"got {len(profiles)} profiles for a network of {network.num_sensors} sensors"
        )


@dataclass(frozen=True)
class FixedSizeDesign:
    n_samples: int
    lambda1: float
    lambda2: float

    def __post_init__(self):
        if int(self.n_samples) != self.n_samples or self.n_samples < 1:
            raise ValueError(f"n_samples must be a positive integer, got {self.n_samples!r}")
        if not 0.0 <= self.lambda1 <= self.lambda2:
            raise ValueError(
                f"need 0 <= lambda1 <= lambda2, got ({self.lambda1!r}, {self.lambda2!r})"
            )


# a_n below this (relative to the boundary scale) counts as the zero boundary
_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class SequentialDesign:
    """Truncated shifted energy test with affine boundaries.

    ``a_bar < 0 < b_bar`` are the boundary intercepts and ``bias`` the
    per-sample drift, all normalized by the noise power. Boundaries are
    ``a_n = max(0, a_bar + n*bias)`` and ``b_n = b_bar + n*bias``.
    """

    n_trunc: int
    a_bar: float
    b_bar: float
    bias: float

    def __post_init__(self):
        if int(self.n_trunc) != self.n_trunc or self.n_trunc < 1:
            raise ValueError(f"n_trunc must be a positive integer, got {self.n_trunc!r}")
        if not self.a_bar < 0.0 < self.b_bar:
            raise ValueError(f"need a_bar < 0 < b_bar, got ({self.a_bar!r}, {self.b_bar!r})")
        if not self.bias > 1.0:
            raise ValueError(f"bias must exceed 1, got {self.bias!r}")

    @classmethod
    def relaxed(cls, n_trunc, b_bar, bias):
        """Design whose lower boundary is identically zero over the horizon."""
        return cls(n_trunc, -(n_trunc + 1.0) * bias, b_bar, bias)

    @property
    def p(self):
        """Number of leading zero lower-boundary entries, floor(-a_bar / bias)."""
        scale = abs(self.a_bar) + 1.0
        return int(math.floor((-self.a_bar + _ZERO_TOL * scale) / self.bias))

    def _raw_lower(self, n):
        raw = self.a_bar + n * self.bias
        scale = abs(self.a_bar) + 1.0
        return np.where(raw <= _ZERO_TOL * scale, 0.0, raw)

    def lower(self):
        return self._raw_lower(np.arange(1, self.n_trunc + 1, dtype=float))

    def upper(self):
        return self.b_bar + np.arange(1, self.n_trunc + 1, dtype=float) * self.bias

    @property
    def is_relaxed(self):
        return self.p >= self.n_trunc

    def check_bias(self, gamma_min):
        if not self.bias < 1.0 + gamma_min:
            raise ValueError(
                f"bias {self.bias!r} must lie below 1 + gamma_min = {1.0 + gamma_min!r}"
            )


def default_bias(gamma_min):
    """Midpoint of the admissible drift interval (1, 1 + gamma_min)."""
    return 1.0 + 0.5 * gamma_min


@dataclass
class SchemeMetrics:
    """Local and global performance of one design across the M sensors."""

    pf: float
    pd: np.ndarray
    delta0: np.ndarray
    delta1: np.ndarray
    rho: np.ndarray
    asn_h0: np.ndarray
    asn_h1: np.ndarray
    asn: np.ndarray
    cost: np.ndarray
    qf: float
    qd: float

    @property
    def max_cost(self):
        return float(np.max(self.cost))


def or_fusion(local_probs):
    """P(at least one sensor sends 1) for independent sensors."""
    p = np.asarray(local_probs, dtype=float)
    return float(-np.expm1(np.sum(np.log1p(-np.clip(p, 0.0, 1.0)))))


def assemble_metrics(pf, pd, delta0, delta1, asn_h0, asn_h1, profiles, network):
    m = len(profiles)
    pd = np.broadcast_to(np.asarray(pd, dtype=float), (m,)).copy()
    delta0 = np.broadcast_to(np.asarray(delta0, dtype=float), (m,)).copy()
    delta1 = np.broadcast_to(np.asarray(delta1, dtype=float), (m,)).copy()
    asn_h0 = np.broadcast_to(np.asarray(asn_h0, dtype=float), (m,)).copy()
    asn_h1 = np.broadcast_to(np.asarray(asn_h1, dtype=float), (m,)).copy()
    cs = np.array([p.cost_sense for p in profiles])
    ct = np.array([p.cost_tx for p in profiles])
    rho = network.pi0 * delta0 + network.pi1 * delta1
    asn = network.pi0 * asn_h0 + network.pi1 * asn_h1
    cost = asn * cs + (1.0 - rho) * ct
    return SchemeMetrics(
        pf=float(pf),
        pd=pd,
        delta0=delta0,
        delta1=delta1,
        rho=rho,
        asn_h0=asn_h0,
        asn_h1=asn_h1,
        asn=asn,
        cost=cost,
        qf=or_fusion(np.full(m, pf)),
        qd=or_fusion(pd),
    )


@dataclass
class Infeasible:
    """Empty feasible set; carries the numbers that prove it."""

    scheme: str
    reason: str
    margins: dict = field(default_factory=dict)

    feasible = False


@dataclass
class Solution:
    scheme: str
    design: object
    metrics: SchemeMetrics
    extra: dict = field(default_factory=dict)

    feasible = True
