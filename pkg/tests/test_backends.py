import os
import subprocess
import sys

import numpy as np

from memfuzz import active_backend, fresh_state, simulate
from memfuzz._kernels import euler_trace, euler_trace_py
from memfuzz.pulsegen import pulse_train

_PROBE = """
import memfuzz
from memfuzz import DeviceParams, PulseTrainSpec, fresh_state, simulate
from memfuzz.pulsegen import pulse_train
params = DeviceParams()
wf = pulse_train(PulseTrainSpec(1.2, 0.05, 0.1, 16), 5e-4)
end = simulate(params, fresh_state(params), wf).final_state
print(memfuzz.active_backend())
print(repr(end.x))
print(repr(end.q))
print(repr(end.phi))
"""


def _run_probe(backend: str) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    env["MEMFUZZ_BACKEND"] = backend
    return subprocess.run([sys.executable, "-c", _PROBE],
                          capture_output=True, text=True, env=env)


def test_backend_reports_a_known_name():
    assert active_backend() in ("numba", "numpy")


def test_compiled_and_interpreted_kernels_agree_bit_for_bit(params,
                                                            write_tpl,
                                                            rng):
    from dataclasses import replace
    wf = pulse_train(replace(write_tpl, count=5), 1e-3)
    v = wf.v + rng.normal(0.0, 0.3, size=len(wf))  # break up the lattice
    args = (v, wf.dt, float(params.r_on), float(params.r_off),
            params.v_th_pos, params.v_th_neg, params.k_drift, True,
            0.25, 0.0, 0.0)
    fast = euler_trace(*args)
    slow = euler_trace_py(*args)
    for a, b in zip(fast, slow):
        assert np.asarray(a).tobytes() == np.asarray(b).tobytes()


def test_interpreted_subprocess_matches_this_process():
    from memfuzz import DeviceParams, PulseTrainSpec
    params = DeviceParams()
    wf = pulse_train(PulseTrainSpec(1.2, 0.05, 0.1, 16), 5e-4)
    end = simulate(params, fresh_state(params), wf).final_state
    proc = _run_probe("numpy")
    assert proc.returncode == 0, proc.stderr
    backend, x, q, phi = proc.stdout.splitlines()
    assert backend == "numpy"
    assert x == repr(end.x)
    assert q == repr(end.q)
    assert phi == repr(end.phi)


def test_forced_numba_subprocess_matches_this_process():
    from memfuzz import DeviceParams, PulseTrainSpec
    params = DeviceParams()
    wf = pulse_train(PulseTrainSpec(1.2, 0.05, 0.1, 16), 5e-4)
    end = simulate(params, fresh_state(params), wf).final_state
    proc = _run_probe("numba")
    if proc.returncode != 0:
        assert "BackendError" in proc.stderr  # numba genuinely unavailable
        return
    backend, x, q, phi = proc.stdout.splitlines()
    assert backend == "numba"
    assert x == repr(end.x)
    assert q == repr(end.q)
    assert phi == repr(end.phi)


def test_unknown_backend_name_fails_import():
    proc = _run_probe("turbo")
    assert proc.returncode != 0
    assert "BackendError" in proc.stderr
    assert "turbo" in proc.stderr
