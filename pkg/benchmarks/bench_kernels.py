"""Time the hot kernels under the numba and numpy backends.

Each backend runs in its own interpreter (the switch is read at import):

    python benchmarks/bench_kernels.py            # both backends, table
    python benchmarks/bench_kernels.py --child    # current backend only, JSON
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    fn()  # warm-up, includes compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def child(repeat):
    import numpy as np

    from ctsense import mc, seq_general
    from ctsense._accel import BACKEND
    from ctsense.models import SequentialDesign, uniform_profiles, NetworkModel

    d = SequentialDesign(8, -5.0, 2.0, 1.5)
    d20 = SequentialDesign(20, -12.0, 3.0, 1.5)
    cfg = mc.McConfig(trials=1_000_000, seed=1)
    net = NetworkModel(5, 0.2, 0.1, 0.9)
    cases = {
        "mc_sequential_N8_1e6": lambda: mc.run_sequential(d, 1, 1.0, cfg),
        "crossing_probs_N8": lambda: seq_general.crossing_probs(d, 1.0),
        "crossing_probs_N20": lambda: seq_general.crossing_probs(d20, 1.0),
        "optimize_2d_N8_res8": lambda: seq_general.optimize_2d(uniform_profiles(5, 1.0), net, 8, grid_resolution=8),
    }
    out = {"backend": BACKEND, "numpy": np.__version__}
    out["seconds"] = {name: _best(fn, repeat) for name, fn in cases.items()}
    print(json.dumps(out))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--child", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if args.child:
        child(args.repeat)
        return
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, CTSENSE_DISABLE_NUMBA=flag)
        cmd = [sys.executable, __file__, "--child", "--repeat", str(args.repeat)]
        res = json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout)
        results[res["backend"]] = res["seconds"]
    names = list(next(iter(results.values())))
    print(f"{'kernel':<24}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name in names:
        a, b = results["numba"][name], results["numpy"][name]
        print(f"{name:<24}{a:>12.4f}{b:>12.4f}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
