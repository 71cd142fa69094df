import json
import os
import subprocess
import sys

from hypothesis import given, strategies as st
import numpy as np
import pytest

from ctsense import kernels
from ctsense._accel import BACKEND


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_kahan_matches_fsum(xs):
    import math

    out = kernels.kahan_cumsum(np.array([xs]))
    assert out[0, -1] == pytest.approx(math.fsum(xs), abs=1e-6)


def test_numpy_paths_agree_with_active_backend():
    rng = np.random.default_rng(5)
    u = rng.random((4000, 7))
    lower = np.array([0.0, 0.0, 0.5, 2.0, 3.5, 5.0, 6.5])
    upper = 2.0 + 1.5 * np.arange(1, 8)
    out = np.empty(4000, dtype=np.int8)
    stop = np.empty(4000, dtype=np.int64)
    kernels._classify_sequential_np(u, 2.0, lower, upper, out, stop)
    got_out, got_stop = kernels.classify_sequential(u, 2.0, lower, upper)
    np.testing.assert_array_equal(out, got_out)
    np.testing.assert_array_equal(stop, got_stop)
    np.testing.assert_allclose(kernels._kahan_cumsum_np(u), kernels.kahan_cumsum(u), rtol=0, atol=1e-12)


_SCRIPT = """
import json
from ctsense import seq_general, mc
from ctsense._accel import BACKEND
from ctsense.models import SequentialDesign
d = SequentialDesign(7, -4.0, 1.5, 1.5)
t = seq_general.crossing_probs(d, 1.0)
r = mc.run_sequential(d, 1, 1.0, mc.McConfig(trials=30000, seed=2))
print(json.dumps({"backend": BACKEND, "cont": t.cont_h1.tolist(), "up": t.upper_h1.tolist(),
                  "stop": r.stop.mean, "send0": r.decide0.mean}))
"""


def _run(disable):
    env = dict(os.environ, CTSENSE_DISABLE_NUMBA="1" if disable else "0")
    res = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def test_fallback_backend_matches_compiled():
    fallback = _run(True)
    assert fallback["backend"] == "numpy"
    compiled = _run(False)
    assert compiled["backend"] == BACKEND
    np.testing.assert_allclose(fallback["cont"], compiled["cont"], rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(fallback["up"], compiled["up"], rtol=1e-13, atol=1e-15)
    assert fallback["stop"] == compiled["stop"]
    assert fallback["send0"] == compiled["send0"]
