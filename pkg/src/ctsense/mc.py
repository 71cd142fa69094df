"""Seeded Monte Carlo simulation of single radios and the OR-fused network.

Trials run in fixed-size blocks. Each (hypothesis, sensor, block) triple
draws from its own ``SeedSequence`` child, so results do not depend on
how many workers process the blocks. All accumulated statistics are sums
of small dyadic rationals and therefore exact in float64; the merged
result is bit-identical for any block order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .kernels import CENSOR, SEND0, SEND1, classify_fixed, classify_sequential
from .models import FixedSizeDesign, SequentialDesign


@dataclass(frozen=True)
class McConfig:
    trials: int = 1_000_000
    seed: int = 20130101
    antithetic: bool = False
    paired: bool = False
    block_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.block_size < 2:
            raise ValueError("block_size must be at least 2")


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int

    def z(self, value):
        """Standardized distance of ``value`` from the estimate.

        The standard error is floored at one trial's resolution so that
        estimates with no observed events still give a finite score.
        """
        se = max(self.stderr, 1.0 / self.trials)
        return (value - self.mean) / se


def scale_for(hypothesis, gamma):
    """Mean of x = |r|^2 / sigma_w^2: 2 under H0, 2(1+gamma) under H1."""
    if hypothesis == 0:
        return 2.0
    if not gamma > 0:
        raise ValueError("gamma must be positive under H1")
    return 2.0 * (1.0 + gamma)


def sample_increment(hypothesis, gamma, rng):
    """One exponential increment by inverse-CDF transform of a uniform draw."""
    return -scale_for(hypothesis, gamma) * math.log1p(-rng.random())


def _stream(mc, hypothesis, sensor, block):
    tag = 0 if mc.paired else int(hypothesis)
    ss = np.random.SeedSequence(entropy=int(mc.seed), spawn_key=(tag, int(sensor), int(block)))
    return np.random.Generator(np.random.PCG64(ss))


def _blocks(mc):
    trials = mc.trials
    if mc.antithetic and trials % 2:
        trials += 1
    bs = mc.block_size - (mc.block_size % 2 if mc.antithetic else 0)
    sizes = [bs] * (trials // bs)
    if trials % bs:
        sizes.append(trials % bs)
    return sizes


def _uniforms(rng, rows, cols, antithetic):
    if not antithetic:
        return rng.random((rows, cols))
    half = rng.random((rows // 2, cols))
    return np.vstack([half, 1.0 - half])


class _Accumulator:
    """Running sums over units (trials, or antithetic pairs)."""

    def __init__(self, width):
        self.s = np.zeros(width)
        self.q = np.zeros(width)
        self.units = 0

    def add(self, part):
        s, q, units = part
        self.s += s
        self.q += q
        self.units += units

    def estimates(self, trials):
        mean = self.s / self.units
        var = np.maximum(self.q / self.units - mean * mean, 0.0)
        se = np.sqrt(var / max(self.units - 1, 1))
        return [McEstimate(float(m), float(e), trials) for m, e in zip(mean, se)]


def _moment_sums(values, antithetic):
    if antithetic:
        h = values.shape[0] // 2
        values = 0.5 * (values[:h] + values[h:])
    return values.sum(axis=0), (values * values).sum(axis=0), values.shape[0]


def _run_blocks(mc, fn):
    sizes = _blocks(mc)
    if mc.workers > 1:
        with ThreadPoolExecutor(mc.workers) as pool:
            parts = list(pool.map(fn, range(len(sizes)), sizes))
    else:
        parts = [fn(b, r) for b, r in enumerate(sizes)]
    return parts, sum(sizes)


@dataclass
class SequentialMc:
    """Outcome rates, stopping time and per-step rates of one radio."""

    decide1: McEstimate
    decide0: McEstimate
    censor: McEstimate
    stop: McEstimate
    upper: list
    lower: list
    cont: list


def _sequential_values(outcome, stop, n):
    rows = outcome.shape[0]
    vals = np.zeros((rows, 4 + 3 * n))
    vals[:, 0] = outcome == SEND1
    vals[:, 1] = outcome == SEND0
    vals[:, 2] = outcome == CENSOR
    vals[:, 3] = stop
    r = np.arange(rows)
    step = stop - 1
    up = outcome == SEND1
    lo = outcome == SEND0
    vals[r[up], 4 + step[up]] = 1.0
    vals[r[lo], 4 + n + step[lo]] = 1.0
    # still undecided after step k: k < stop, or never decided
    k = np.arange(1, n + 1)
    vals[:, 4 + 2 * n :] = (k[None, :] < stop[:, None]) | (outcome == CENSOR)[:, None]
    return vals


def _sequential_sums(outcome, stop, n, antithetic):
    if antithetic:
        return _moment_sums(_sequential_values(outcome, stop, n), antithetic)
    rows = outcome.shape[0]
    # indicators: sum of squares equals sum
    counts = np.bincount(outcome, minlength=3).astype(float)
    up = np.bincount(stop[outcome == SEND1] - 1, minlength=n).astype(float)
    lo = np.bincount(stop[outcome == SEND0] - 1, minlength=n).astype(float)
    cont = rows - np.cumsum(up + lo)
    st = stop.astype(float)
    s = np.concatenate([[counts[SEND1], counts[SEND0], counts[CENSOR], st.sum()], up, lo, cont])
    q = s.copy()
    q[3] = (st * st).sum()
    return s, q, rows


def run_sequential(design, hypothesis, gamma, mc):
    """Simulate the truncated two-boundary test; decisions use weak inequalities."""
    lower, upper = design.lower(), design.upper()
    scale = scale_for(hypothesis, gamma)
    n = design.n_trunc

    def block(b, rows):
        u = _uniforms(_stream(mc, hypothesis, 0, b), rows, n, mc.antithetic)
        outcome, stop = classify_sequential(u, scale, lower, upper)
        return _sequential_sums(outcome, stop, n, mc.antithetic)

    parts, total = _run_blocks(mc, block)
    acc = _Accumulator(4 + 3 * n)
    for part in parts:
        acc.add(part)
    est = acc.estimates(total)
    return SequentialMc(
        est[0], est[1], est[2], est[3], est[4 : 4 + n], est[4 + n : 4 + 2 * n], est[4 + 2 * n :]
    )


@dataclass
class FixedMc:
    send1: McEstimate
    send0: McEstimate
    censor: McEstimate


def run_fixed(design, hypothesis, gamma, mc):
    scale = scale_for(hypothesis, gamma)

    def block(b, rows):
        u = _uniforms(_stream(mc, hypothesis, 0, b), rows, design.n_samples, mc.antithetic)
        outcome = classify_fixed(u, scale, design.lambda1, design.lambda2)
        vals = np.stack([outcome == SEND1, outcome == SEND0, outcome == CENSOR], axis=1)
        return _moment_sums(vals.astype(float), mc.antithetic)

    parts, total = _run_blocks(mc, block)
    acc = _Accumulator(3)
    for part in parts:
        acc.add(part)
    return FixedMc(*acc.estimates(total))


@dataclass
class NetworkMc:
    qf: McEstimate
    qd: McEstimate


def _sensor_send1(design, scale, u):
    if isinstance(design, FixedSizeDesign):
        return classify_fixed(u, scale, design.lambda1, design.lambda2) == SEND1
    outcome, _ = classify_sequential(u, scale, design.lower(), design.upper())
    return outcome == SEND1


def run_network(designs, profiles, network, mc):
    """Global false-alarm and detection rates under OR fusion.

    ``designs`` is one design shared by all sensors or a list with one per
    sensor; fixed-size or sequential designs select the scheme. Censored
    sensors send nothing, and the fusion center declares H1 iff at least
    one sensor sends 1.
    """
    m = network.num_sensors
    if isinstance(designs, (FixedSizeDesign, SequentialDesign)):
        designs = [designs] * m
    if len(designs) != m or len(profiles) != m:
        raise ValueError("need one design and one profile per sensor")

    out = []
    for h in (0, 1):

        def block(b, rows, h=h):
            fc = np.zeros(rows, dtype=bool)
            for j, (d, prof) in enumerate(zip(designs, profiles)):
                n = d.n_samples if isinstance(d, FixedSizeDesign) else d.n_trunc
                u = _uniforms(_stream(mc, h, j, b), rows, n, mc.antithetic)
                fc |= _sensor_send1(d, scale_for(h, prof.gamma), u)
            return _moment_sums(fc[:, None].astype(float), mc.antithetic)

        parts, total = _run_blocks(mc, block)
        acc = _Accumulator(1)
        for part in parts:
            acc.add(part)
        out.append(acc.estimates(total)[0])
    return NetworkMc(out[0], out[1])
