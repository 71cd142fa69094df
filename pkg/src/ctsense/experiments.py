"""Parameter sweeps, theorem checks and analytic-vs-simulation validation.

All three entry points share one parameter block, ``SweepSpec``, which is
loaded from JSON with field-path error messages. Sweeps produce CSV rows in
a fixed column order with numbers at 9 significant digits, so two runs with
the same spec and seed are byte-identical.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields
import io
import itertools
import math

import numpy as np

from . import censoring, mc, seq_general, seq_relaxed
from . import quadrature
from .models import (
    FixedSizeDesign,
    NetworkModel,
    SensorProfile,
    SequentialDesign,
    db_to_linear,
    default_bias,
)

SCHEMES = ("censoring", "seq-relaxed", "seq-general")
VARIABLES = ("beta", "M", "snr_db", "N", "ct_over_cs")
_INT_VARIABLES = ("M", "N")


class ConfigError(ValueError):
    """Malformed sweep configuration; the message starts with the field path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def _number(path, v, lo=None, hi=None, open_lo=False, open_hi=False, integer=False):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise ConfigError(path, f"must be finite, got {v!r}")
    if integer and int(v) != v:
        raise ConfigError(path, f"expected an integer, got {v!r}")
    if lo is not None and (v <= lo if open_lo else v < lo):
        raise ConfigError(path, f"must be {'>' if open_lo else '>='} {lo}, got {v!r}")
    if hi is not None and (v >= hi if open_hi else v > hi):
        raise ConfigError(path, f"must be {'<' if open_hi else '<='} {hi}, got {v!r}")
    return int(v) if integer else float(v)


@dataclass
class SweepSpec:
    """One sweep: a swept variable over a grid plus the fixed parameters.

    ``snr_db`` is a single value (all sensors) or one value per sensor.
    ``bias`` of None picks 1 + gamma_min / 2 at every grid point.
    ``trials`` of 0 skips the per-row Monte Carlo cross-check.
    """

    scheme: str = "all"
    variable: str = "beta"
    values: list = field(default_factory=lambda: [0.9])
    num_sensors: int = 5
    pi0: list = field(default_factory=lambda: [0.2, 0.8])
    alpha: float = 0.1
    beta: float = 0.9
    snr_db: object = 0.0
    cost_sense: float = 1.0
    cost_tx: float = 10.0
    n_samples: int = 10
    bias: object = None
    grid_resolution: int = 40
    scan_points: int = 2000
    trials: int = 0
    seed: int = 20130101
    workers: int = 1

    @classmethod
    def from_dict(cls, data, path="config"):
        if not isinstance(data, dict):
            raise ConfigError(path, f"expected an object, got {type(data).__name__}")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(f"{path}.{key}", "unknown field")
        spec = cls(**data)
        spec.validate(path)
        return spec

    def to_dict(self):
        return asdict(self)

    def schemes(self):
        return SCHEMES if self.scheme == "all" else (self.scheme,)

    def validate(self, path="config"):
        p = lambda name: f"{path}.{name}"  # noqa: E731
        if self.scheme not in SCHEMES + ("all",):
            raise ConfigError(p("scheme"), f"expected one of {SCHEMES + ('all',)}, got {self.scheme!r}")
        if self.variable not in VARIABLES:
            raise ConfigError(p("variable"), f"expected one of {VARIABLES}, got {self.variable!r}")
        if not isinstance(self.values, (list, tuple)) or not self.values:
            raise ConfigError(p("values"), "must be a nonempty list")
        vals = [self._check_value(f"{p('values')}[{i}]", v) for i, v in enumerate(self.values)]
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError(p("values"), "must be strictly increasing")
        self.values = vals

        self.num_sensors = _number(p("num_sensors"), self.num_sensors, lo=1, integer=True)
        if not isinstance(self.pi0, (list, tuple)) or not self.pi0:
            raise ConfigError(p("pi0"), "must be a nonempty list")
        self.pi0 = [
            _number(f"{p('pi0')}[{i}]", v, 0, 1, True, True) for i, v in enumerate(self.pi0)
        ]
        self.alpha = _number(p("alpha"), self.alpha, 0, 1, True, True)
        self.beta = _number(p("beta"), self.beta, 0, 1, True, True)
        if isinstance(self.snr_db, (list, tuple)):
            self.snr_db = [_number(f"{p('snr_db')}[{i}]", v) for i, v in enumerate(self.snr_db)]
            if self.variable in ("M", "snr_db"):
                raise ConfigError(p("snr_db"), f"must be a single value when sweeping {self.variable}")
            if len(self.snr_db) != self.num_sensors:
                raise ConfigError(
                    p("snr_db"), f"has {len(self.snr_db)} entries for {self.num_sensors} sensors"
                )
        else:
            self.snr_db = _number(p("snr_db"), self.snr_db)
        self.cost_sense = _number(p("cost_sense"), self.cost_sense, lo=0)
        self.cost_tx = _number(p("cost_tx"), self.cost_tx, lo=0)
        self.n_samples = _number(p("n_samples"), self.n_samples, lo=1, integer=True)
        if self.bias is not None:
            self.bias = _number(p("bias"), self.bias, lo=1, open_lo=True)
        self.grid_resolution = _number(p("grid_resolution"), self.grid_resolution, lo=2, integer=True)
        self.scan_points = _number(p("scan_points"), self.scan_points, lo=2, integer=True)
        self.trials = _number(p("trials"), self.trials, lo=0, integer=True)
        self.seed = _number(p("seed"), self.seed, lo=0, integer=True)
        self.workers = _number(p("workers"), self.workers, lo=1, integer=True)

        n_values = vals if self.variable == "N" else [self.n_samples]
        limits = {"seq-relaxed": seq_relaxed.MAX_TRUNCATION, "seq-general": seq_general.MAX_TRUNCATION}
        for scheme in self.schemes():
            if scheme in limits and max(n_values) > limits[scheme]:
                where = p("values") if self.variable == "N" else p("n_samples")
                raise ConfigError(where, f"N above {limits[scheme]} is not supported by {scheme}")
        return self

    def _check_value(self, path, v):
        if self.variable == "beta":
            return _number(path, v, 0, 1, True, True)
        if self.variable in _INT_VARIABLES:
            return _number(path, v, lo=1, integer=True)
        if self.variable == "ct_over_cs":
            return _number(path, v, lo=0)
        return _number(path, v)

    def point(self, value, pi0):
        """(profiles, network, N) with the swept variable set to ``value``."""
        m, beta, n = self.num_sensors, self.beta, self.n_samples
        snr, ct = self.snr_db, self.cost_tx
        if self.variable == "beta":
            beta = value
        elif self.variable == "M":
            m = int(value)
        elif self.variable == "snr_db":
            snr = value
        elif self.variable == "N":
            n = int(value)
        else:
            ct = value * self.cost_sense
        snrs = snr if isinstance(snr, list) else [snr] * m
        profiles = [SensorProfile(float(db_to_linear(s)), self.cost_sense, ct) for s in snrs]
        return profiles, NetworkModel(m, pi0, self.alpha, beta), n

    def bias_for(self, profiles):
        return self.bias if self.bias is not None else default_bias(min(p.gamma for p in profiles))


# -- sweeps -------------------------------------------------------------------------

HEADER = (
    "scheme", "variable", "value", "pi0", "feasible",
    "n", "lambda1", "lambda2", "a_bar", "b_bar", "bias",
    "pf", "pd_min", "pd_max", "rho_min", "rho_max", "asn_min", "asn_max",
    "max_cost", "qf", "qd", "qf_margin", "qd_margin",
    "mc_qf", "mc_qd", "mc_qf_z", "mc_qd_z", "note",
)  # fmt: skip

QF_SLACK = 1e-9
QD_SLACK = 1e-6


def fmt(x):
    """9 significant digits; blank for missing values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return f"{float(x):.9g}"


def optimize(scheme, profiles, network, n, spec):
    bias = spec.bias_for(profiles)
    if scheme == "censoring":
        return censoring.optimize_censoring(profiles, network, n)
    if scheme == "seq-relaxed":
        return seq_relaxed.optimize_b(profiles, network, n, bias, grid_points=spec.scan_points)
    if scheme == "seq-general":
        return seq_general.optimize_2d(profiles, network, n, bias, grid_resolution=spec.grid_resolution)
    raise ValueError(f"unknown scheme {scheme!r}")


def design_metrics(scheme, profiles, network, design):
    if scheme == "censoring":
        return censoring.scheme_metrics(profiles, network, design)
    if scheme == "seq-relaxed":
        return seq_relaxed.seq_metrics(profiles, network, design)
    return seq_general.seq_metrics_general(profiles, network, design)


def _infeasible_margins(result, network):
    m = result.margins
    if "qf_at_required" in m:
        return network.alpha - m["qf_at_required"], None
    if "best_margin" in m:
        return network.alpha - m["qf"], m["qd"] - network.beta
    qf_margin = network.alpha - m["qf_at_b_hi"] if "qf_at_b_hi" in m else None
    if "qd_at_b_lo" in m:
        return qf_margin, m["qd_at_b_lo"] - network.beta
    if "qd_at_b_min" in m:
        return qf_margin, m["qd_at_b_min"] - network.beta
    return qf_margin, None


def _row(scheme, spec, value, pi0):
    profiles, network, n = spec.point(value, pi0)
    row = dict.fromkeys(HEADER)
    row.update(scheme=scheme, variable=spec.variable, value=value, pi0=pi0, n=n)
    result = optimize(scheme, profiles, network, n, spec)
    if not result.feasible:
        row["feasible"] = "0"
        row["qf_margin"], row["qd_margin"] = _infeasible_margins(result, network)
        row["note"] = result.reason
        return row
    d, m = result.design, result.metrics
    row["feasible"] = "1"
    if isinstance(d, FixedSizeDesign):
        row.update(lambda1=d.lambda1, lambda2=d.lambda2)
    else:
        row.update(a_bar=d.a_bar, b_bar=d.b_bar, bias=d.bias)
    row.update(
        pf=m.pf,
        pd_min=m.pd.min(), pd_max=m.pd.max(),
        rho_min=m.rho.min(), rho_max=m.rho.max(),
        asn_min=m.asn.min(), asn_max=m.asn.max(),
        max_cost=m.max_cost, qf=m.qf, qd=m.qd,
        qf_margin=network.alpha - m.qf, qd_margin=m.qd - network.beta,
    )  # fmt: skip
    if spec.trials > 0:
        est = mc.run_network(d, profiles, network, mc.McConfig(trials=spec.trials, seed=spec.seed))
        row.update(mc_qf=est.qf.mean, mc_qd=est.qd.mean, mc_qf_z=est.qf.z(m.qf), mc_qd_z=est.qd.z(m.qd))
    return row


def recheck(row, spec):
    """Re-evaluate Q_F and Q_D from the thresholds as printed; returns a failure or None."""
    if row["feasible"] != "1":
        return None
    value = float(row["value"])
    profiles, network, n = spec.point(value, float(row["pi0"]))
    if row["scheme"] == "censoring":
        design = FixedSizeDesign(n, float(row["lambda1"]), float(row["lambda2"]))
    else:
        design = SequentialDesign(n, float(row["a_bar"]), float(row["b_bar"]), float(row["bias"]))
        if row["scheme"] == "seq-relaxed":
            design = SequentialDesign.relaxed(n, design.b_bar, design.bias)
    m = design_metrics(row["scheme"], profiles, network, design)
    if m.qf <= network.alpha + QF_SLACK and m.qd >= network.beta - QD_SLACK:
        return None
    return {
        "check": "constraints",
        "scheme": row["scheme"],
        "value": row["value"],
        "pi0": row["pi0"],
        "qf": m.qf,
        "qd": m.qd,
    }


@dataclass
class SweepResult:
    rows: list
    failures: list

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for row in self.rows:
            writer.writerow([row[k] for k in HEADER])
        return buf.getvalue()


def run_sweep(spec):
    """One row per (pi0, grid value, scheme), in that nesting order."""
    spec.validate()
    tasks = [
        (scheme, v, pi0)
        for pi0, v, scheme in itertools.product(spec.pi0, spec.values, spec.schemes())
    ]
    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            raw = list(pool.map(lambda t: _row(t[0], spec, t[1], t[2]), tasks))
    else:
        raw = [_row(s, spec, v, pi0) for s, v, pi0 in tasks]
    rows = [{k: fmt(r[k]) for k in HEADER} for r in raw]
    failures = [f for f in (recheck(r, spec) for r in rows) if f is not None]
    return SweepResult(rows, failures)


# -- theorem checks -----------------------------------------------------------------


@dataclass
class TheoremCheck:
    name: str
    passed: bool
    witness: dict


def _base(spec, pi0):
    snrs = spec.snr_db if isinstance(spec.snr_db, list) else [spec.snr_db] * spec.num_sensors
    profiles = [SensorProfile(float(db_to_linear(s)), spec.cost_sense, spec.cost_tx) for s in snrs]
    return profiles, NetworkModel(spec.num_sensors, pi0, spec.alpha, spec.beta), spec.n_samples


def check_lambda1_monotone(spec, points=100):
    """Cost at fixed lambda2 never decreases as lambda1 grows from 0 to lambda2."""
    worst = math.inf
    witness = {}
    for pi0 in spec.pi0:
        profiles, network, n = _base(spec, pi0)
        lam2 = censoring.lambda2_for_qd(n, [p.gamma for p in profiles], network.beta)
        costs = np.array(
            [
                censoring.scheme_metrics(profiles, network, FixedSizeDesign(n, l1, lam2)).cost
                for l1 in np.linspace(0.0, lam2, points)
            ]
        )
        steps = np.diff(costs, axis=0)
        tol = 1e-12 * np.abs(costs).max()
        low = float(steps.min())
        if low < worst:
            worst = low
            witness = {
                "pi0": pi0,
                "lambda2": lam2,
                "min_step": low,
                "tolerance": tol,
                "cost_at_lambda1_0": float(costs[0].max()),
                "cost_at_lambda1_lambda2": float(costs[-1].max()),
            }
        if low < -tol:
            return TheoremCheck("lambda1-monotone", False, witness)
    return TheoremCheck("lambda1-monotone", True, witness)


THEOREM2_N = (1, 2, 5, 10, 20)
THEOREM2_B = (0.5, 1.0, 2.0, 5.0, 10.0)


def theorem2_designs(bias):
    """50 designs: relaxed and half-span lower intercepts over an (N, b_bar) grid."""
    out = []
    for n, b in itertools.product(THEOREM2_N, THEOREM2_B):
        out.append(SequentialDesign.relaxed(n, b, bias))
        out.append(SequentialDesign(n, -0.5 * n * bias, b, bias))
    return out


def check_censoring_rate(spec, slack=1e-9):
    """Silent probability of a sequential design is at most that of the
    fixed-size rule with zero lower threshold and the same (P_f, P_d)."""
    worst = -math.inf
    witness = {}
    for pi0 in spec.pi0:
        profiles, network, _ = _base(spec, pi0)
        bias = spec.bias_for(profiles)
        for d in theorem2_designs(bias):
            m = seq_general.seq_metrics_general(profiles, network, d)
            rho_fixed = 1.0 - (pi0 * m.pf + (1.0 - pi0) * m.pd)
            gap = float(np.max(m.rho - rho_fixed))
            if gap > worst:
                worst = gap
                witness = {
                    "pi0": pi0,
                    "n": d.n_trunc,
                    "a_bar": d.a_bar,
                    "b_bar": d.b_bar,
                    "rho_sequential": float(m.rho.max()),
                    "rho_fixed": float(rho_fixed.max()),
                    "gap": gap,
                }
    witness["designs"] = len(THEOREM2_N) * len(THEOREM2_B) * 2
    return TheoremCheck("censoring-rate", worst <= slack, witness)


THEOREM3_PI0 = (0.01, 0.05)


def check_low_prior(spec, pi0s=THEOREM3_PI0, slack=1e-9):
    """At small pi0 the optimized sequential test costs no more than censoring."""
    witness = {}
    ok = True
    for pi0 in pi0s:
        profiles, network, n = _base(spec, pi0)
        gammas = {p.gamma for p in profiles}
        if len(gammas) != 1:
            profiles = [SensorProfile(min(gammas), p.cost_sense, p.cost_tx) for p in profiles]
        c = censoring.optimize_censoring(profiles, network, n)
        s = seq_relaxed.optimize_b(profiles, network, n, spec.bias_for(profiles), spec.scan_points)
        entry = {"censoring_feasible": c.feasible, "sequential_feasible": s.feasible}
        if c.feasible and s.feasible:
            entry.update(censoring=c.metrics.max_cost, sequential=s.metrics.max_cost)
            ok &= s.metrics.max_cost <= c.metrics.max_cost + slack
        elif c.feasible:
            ok = False
        witness[f"pi0={pi0:g}"] = entry
    return TheoremCheck("low-prior", bool(ok), witness)


def verify_theorems(spec):
    spec.validate()
    return [check_lambda1_monotone(spec), check_censoring_rate(spec), check_low_prior(spec)]


# -- analytic vs. Monte Carlo ---------------------------------------------------------

RELAXED_GRID = dict(n=(1, 2, 5, 10, 30), b_bar=(0.5, 2.0, 5.0, 10.0), bias=(1.1, 1.5), gamma=(0.5, 1.0, 2.0))

# (N, a_bar as a fraction of -N*bias, b_bar, bias, gamma)
GENERAL_GRID = tuple(
    (n, frac, b, lb, g)
    for k, (n, frac) in enumerate(
        itertools.product((2, 3, 4, 5, 6, 8), (0.2, 0.45, 0.7, 0.95))
    )
    for b, lb, g in [((0.5, 1.5, 3.0, 6.0)[k % 4], (1.2, 1.5)[k % 2], (0.5, 1.0, 2.0)[k % 3])]
)

FIXED_GRID = dict(n=(1, 5, 10), gamma=(0.5, 1.0, 2.0), window=((0.0, 1.0), (0.5, 1.5), (0.8, 2.5)))

SUITE_TRIALS = {"seq-relaxed": 1_000_000, "seq-general": 10_000_000, "censoring": 1_000_000}
Z_LIMIT = 3.0
QUAD_RTOL = 1e-6
QUAD_STEPS = 4


@dataclass
class OracleReport:
    max_z: dict = field(default_factory=dict)
    max_quad_rel: dict = field(default_factory=dict)
    comparisons: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, suite, quantity, point, analytic, est):
        z = est.z(analytic)
        self.comparisons += 1
        key = f"{suite}/{quantity}"
        self.max_z[key] = max(self.max_z.get(key, 0.0), abs(z))
        if abs(z) > Z_LIMIT:
            self.failures.append(
                {
                    "suite": suite,
                    "quantity": quantity,
                    "design": point,
                    "analytic": analytic,
                    "mc": est.mean,
                    "stderr": est.stderr,
                    "z": z,
                }
            )

    def record_quad(self, suite, quantity, point, analytic, reference):
        rel = abs(analytic - reference) / max(abs(reference), 1e-300)
        key = f"{suite}/{quantity}"
        self.max_quad_rel[key] = max(self.max_quad_rel.get(key, 0.0), rel)
        if rel > QUAD_RTOL:
            self.failures.append(
                {
                    "suite": suite,
                    "quantity": quantity,
                    "design": point,
                    "analytic": analytic,
                    "quadrature": reference,
                    "rel_error": rel,
                }
            )


def _combo(weights, estimates):
    mean = sum(w * e.mean for w, e in zip(weights, estimates))
    se = math.sqrt(sum((w * e.stderr) ** 2 for w, e in zip(weights, estimates)))
    return mc.McEstimate(mean, se, estimates[0].trials)


def _validate_relaxed(report, spec, cfg):
    h0_cache = {}
    g = RELAXED_GRID
    for n, b, lb, gamma in itertools.product(g["n"], g["b_bar"], g["bias"], g["gamma"]):
        d = SequentialDesign.relaxed(n, b, lb)
        point = {"n": n, "b_bar": b, "bias": lb, "gamma": gamma}
        if (n, b, lb) not in h0_cache:
            h0_cache[(n, b, lb)] = mc.run_sequential(d, 0, None, cfg)
        s0 = h0_cache[(n, b, lb)]
        s1 = mc.run_sequential(d, 1, gamma, cfg)
        pf = seq_relaxed.local_pf_seq(d)
        pd = seq_relaxed.local_pd_seq(d, gamma)
        report.record("seq-relaxed", "pf", point, pf, s0.decide1)
        report.record("seq-relaxed", "pd", point, pd, s1.decide1)
        for pi0 in spec.pi0:
            e0, e1, _ = seq_relaxed.asn(d, gamma, pi0)
            _, _, rho = seq_relaxed.censor_rate_seq(d, gamma, pi0)
            report.record("seq-relaxed", "rho", {**point, "pi0": pi0}, rho,
                          _combo((pi0, 1.0 - pi0), (s0.censor, s1.censor)))  # fmt: skip
        report.record("seq-relaxed", "asn_h0", point, e0, s0.stop)
        report.record("seq-relaxed", "asn_h1", point, e1, s1.stop)


def general_designs():
    return [
        (SequentialDesign(n, -frac * n * lb, b, lb), g) for n, frac, b, lb, g in GENERAL_GRID
    ]


def _validate_general(report, spec, cfg, quad=True):
    for d, gamma in general_designs():
        point = {"n": d.n_trunc, "a_bar": d.a_bar, "b_bar": d.b_bar, "bias": d.bias, "gamma": gamma}
        t = seq_general.crossing_probs(d, gamma)
        for h, sim in ((0, mc.run_sequential(d, 0, None, cfg)), (1, mc.run_sequential(d, 1, gamma, cfg))):
            up = t.upper_h0 if h == 0 else t.upper_h1
            low = t.lower_h0 if h == 0 else t.lower_h1
            cont = t.cont_h0 if h == 0 else t.cont_h1
            report.record("seq-general", f"send1_h{h}", point, math.fsum(up), sim.decide1)
            report.record("seq-general", f"send0_h{h}", point, math.fsum(low), sim.decide0)
            report.record("seq-general", f"censor_h{h}", point, cont[-1], sim.censor)
            report.record("seq-general", f"asn_h{h}", point, 1.0 + math.fsum(cont[:-1]), sim.stop)
            for k in range(d.n_trunc):
                report.record("seq-general", f"upper_step_h{h}", {**point, "step": k + 1}, up[k], sim.upper[k])
                report.record("seq-general", f"lower_step_h{h}", {**point, "step": k + 1}, low[k], sim.lower[k])
        if quad:
            lower, upper = d.lower(), d.upper()
            for h, theta in ((0, seq_relaxed.rate()), (1, seq_relaxed.rate(gamma))):
                up = t.upper_h0 if h == 0 else t.upper_h1
                cont = t.cont_h0 if h == 0 else t.cont_h1
                for n in range(1, min(QUAD_STEPS, d.n_trunc) + 1):
                    pt = {**point, "step": n}
                    report.record_quad("seq-general", f"cont_h{h}", pt, cont[n - 1],
                                       quadrature.continuation(lower, upper, n, theta))  # fmt: skip
                    report.record_quad("seq-general", f"upper_step_h{h}", pt, up[n - 1],
                                       quadrature.upper_crossing(lower, upper, n, theta))  # fmt: skip


def _validate_censoring(report, spec, cfg):
    g = FIXED_GRID
    for n, gamma, (w1, w2) in itertools.product(g["n"], g["gamma"], g["window"]):
        # thresholds as multiples of the H0 mean energy 2N
        d = FixedSizeDesign(n, 2.0 * n * w1, 2.0 * n * w2)
        point = {"n": n, "lambda1": d.lambda1, "lambda2": d.lambda2, "gamma": gamma}
        d0, d1 = censoring.censor_deltas(d, gamma)
        pf, pd = censoring.local_pf(d), censoring.local_pd(d, gamma)
        for h, (p1, dl) in enumerate(((pf, d0), (pd, d1))):
            sim = mc.run_fixed(d, h, gamma, cfg)
            report.record("censoring", f"send1_h{h}", point, p1, sim.send1)
            report.record("censoring", f"censor_h{h}", point, dl, sim.censor)
            report.record("censoring", f"send0_h{h}", point, 1.0 - p1 - dl, sim.send0)


SUITES = {
    "seq-relaxed": _validate_relaxed,
    "seq-general": _validate_general,
    "censoring": _validate_censoring,
}


def validate_against_oracle(spec, suites=SCHEMES, trials=None, antithetic=False):
    """Analytic quantities against seeded simulation over documented design grids.

    ``trials`` of None uses the per-suite defaults in ``SUITE_TRIALS``.
    """
    spec.validate()
    report = OracleReport()
    for name in suites:
        if name not in SUITES:
            raise ConfigError("suites", f"unknown suite {name!r}")
        cfg = mc.McConfig(
            trials=trials or SUITE_TRIALS[name], seed=spec.seed, antithetic=antithetic,
            workers=spec.workers,
        )  # fmt: skip
        SUITES[name](report, spec, cfg)
    return report
