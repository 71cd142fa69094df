"""Command line: ``ctsense sweep | verify-theorems | validate-oracle``.

Every subcommand reads an optional JSON config (the SweepSpec fields) and
then applies flag overrides one-for-one. On any failed check the process
exits with status 1 and prints a JSON failure summary to stdout.
"""

import argparse
from dataclasses import fields
import json
import sys

import numpy as np

from .experiments import SCHEMES, ConfigError, SweepSpec, run_sweep, validate_against_oracle, verify_theorems

EXIT_FAIL = 1
EXIT_CONFIG = 2


def _csv_floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


# flag name -> (SweepSpec field, parser)
_OVERRIDES = {
    "scheme": ("scheme", str),
    "variable": ("variable", str),
    "values": ("values", _csv_floats),
    "num-sensors": ("num_sensors", int),
    "pi0": ("pi0", _csv_floats),
    "alpha": ("alpha", float),
    "beta": ("beta", float),
    "snr-db": ("snr_db", float),
    "cost-sense": ("cost_sense", float),
    "cost-tx": ("cost_tx", float),
    "n-samples": ("n_samples", int),
    "bias": ("bias", float),
    "grid-resolution": ("grid_resolution", int),
    "scan-points": ("scan_points", int),
    "seed": ("seed", int),
    "trials": ("trials", int),
    "workers": ("workers", int),
}


def _add_common(p):
    p.add_argument("--config", help="JSON file with SweepSpec fields")
    for flag, (_, kind) in _OVERRIDES.items():
        p.add_argument(f"--{flag}", type=kind, default=None, metavar=flag.upper().replace("-", "_"))
    p.add_argument("--out", help="output path (CSV for sweep, JSON otherwise); default stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="ctsense", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _add_common(sub.add_parser("sweep", help="optimize every scheme over a parameter grid, emit CSV"))
    _add_common(sub.add_parser("verify-theorems", help="run the three structural property checks"))
    v = sub.add_parser("validate-oracle", help="compare analytic results with simulation")
    _add_common(v)
    v.add_argument("--suites", default=",".join(SCHEMES), help="comma list of suites")
    v.add_argument("--antithetic", action="store_true")
    return parser


def load_spec(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(args.config, str(exc)) from exc
        if not isinstance(data, dict):
            raise ConfigError(args.config, "top level must be a JSON object")
    known = {f.name for f in fields(SweepSpec)}
    for key in data:
        if key not in known:
            raise ConfigError(f"config.{key}", "unknown field")
    for flag, (name, _) in _OVERRIDES.items():
        v = getattr(args, flag.replace("-", "_"))
        if v is not None:
            data[name] = v
    return SweepSpec.from_dict(data)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    return x


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(summary):
    print(json.dumps(_jsonable({"status": "fail", **summary}), indent=2, sort_keys=True))
    return EXIT_FAIL


def cmd_sweep(args, spec):
    result = run_sweep(spec)
    _emit(result.to_csv(), args.out)
    if result.failures:
        return _fail({"command": "sweep", "failures": result.failures})
    return 0


def cmd_verify(args, spec):
    checks = verify_theorems(spec)
    report = {
        "command": "verify-theorems",
        "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in checks],
    }
    text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if args.out:
        _emit(text, args.out)
    failed = [c for c in report["checks"] if not c["passed"]]
    if failed:
        return _fail({"command": "verify-theorems", "failures": failed})
    if not args.out:
        _emit(text, None)
    return 0


def cmd_validate(args, spec):
    suites = [s for s in args.suites.split(",") if s]
    report = validate_against_oracle(
        spec, suites, trials=args.trials, antithetic=args.antithetic
    )
    summary = {
        "command": "validate-oracle",
        "comparisons": report.comparisons,
        "max_z": report.max_z,
        "max_quadrature_rel_error": report.max_quad_rel,
        "failures": report.failures,
    }
    text = json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n"
    if args.out:
        _emit(text, args.out)
    if not report.passed:
        return _fail(summary)
    if not args.out:
        _emit(text, None)
    return 0


COMMANDS = {"sweep": cmd_sweep, "verify-theorems": cmd_verify, "validate-oracle": cmd_validate}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args)
    except (ConfigError, TypeError) as exc:
        print(json.dumps({"status": "config-error", "error": str(exc)}), file=sys.stdout)
        return EXIT_CONFIG
    return COMMANDS[args.command](args, spec)


if __name__ == "__main__":
    sys.exit(main())
