"""Integration kernels with a selectable numba / plain-python backend.

The hot loop of the whole package is the per-sample state update of the
threshold-gated drift model: every programming pulse, calibration probe and
inverse-solver sweep walks this recurrence, so it is worth compiling.  The
same source function is either passed through ``numba.njit`` or executed by
the interpreter, which keeps the two paths bit-identical (numba's default
nopython float semantics match CPython's).

Backend selection happens once, at import time, from the ``MEMFUZZ_BACKEND``
environment variable:

``auto``
    (default) use numba when it is importable, else the interpreted path.
``numba``
    require numba; raise :class:`~memfuzz.errors.BackendError` if missing.
``numpy``
    force the interpreted fallback (useful for debugging and benchmarks).
"""

from __future__ import annotations

import os

import numpy as np

from .errors import BackendError

ENV_VAR = "MEMFUZZ_BACKEND"


def _euler_trace(v, dt, r_on, r_off, v_th_pos, v_th_neg, k_drift, gated,
                 x0, q0, phi0):
    # Explicit Euler over a uniformly sampled drive waveform.  Sample k
    # reports the state *before* the step from t_k to t_{k+1}, so the last
    # sample carries the final state and its voltage is never integrated.
    n = v.shape[0]
    i_out = np.empty(n)
    x_out = np.empty(n)
    q_out = np.empty(n)
    phi_out = np.empty(n)
    x = x0
    q = q0
    phi = phi0
    for k in range(n):
        m = x * r_on + (1.0 - x) * r_off
        cur = v[k] / m
        i_out[k] = cur
        x_out[k] = x
        q_out[k] = q
        phi_out[k] = phi
        if k + 1 < n:
            if (not gated) or v[k] > v_th_pos or v[k] < v_th_neg:
                x = x + k_drift * cur * dt
                if x > 1.0:
                    x = 1.0
                elif x < 0.0:
                    x = 0.0
            q = q + cur * dt
            phi = phi + v[k] * dt
    return i_out, x_out, q_out, phi_out


def _select() -> str:
    choice = os.environ.get(ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise BackendError(
            f"{ENV_VAR} must be one of auto/numba/numpy, got {choice!r}")
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise BackendError(
                f"{ENV_VAR}=numba but the numba package is not importable")
        return "numpy"
    return "numba"


BACKEND = _select()

# Both implementations stay importable so the benchmark can compare them.
euler_trace_py = _euler_trace
if BACKEND == "numba":
    import numba

    euler_trace_jit = numba.njit(cache=True)(_euler_trace)
    euler_trace = euler_trace_jit
else:
    euler_trace_jit = None
    euler_trace = _euler_trace


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return BACKEND
