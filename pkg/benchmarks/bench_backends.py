#!/usr/bin/env python3
"""Benchmark the integration kernel: numba-compiled vs interpreted.

Runs the same Euler recurrence through both backends on write-train
waveforms of increasing length, reports median wall time, throughput and
speedup, and verifies the two paths produce bit-identical traces.

Usage:
    python3 benchmarks/bench_backends.py [--repeats N]

The numba path is skipped (with a notice) when numba is not importable.
"""

import argparse
import time
from dataclasses import replace

import numpy as np

from memfuzz import DeviceParams, PulseTrainSpec
from memfuzz._kernels import euler_trace_py
from memfuzz.pulsegen import pulse_train

try:
    import numba

    # Compile our own copy instead of importing the package's, so the
    # comparison works even when MEMFUZZ_BACKEND=numpy forced the
    # fallback at import time.
    euler_trace_jit = numba.njit(cache=True)(euler_trace_py)
except ImportError:
    euler_trace_jit = None

# (label, pulse count, dt) — spans a quick read burst up to a
# calibration-sized sweep of the recurrence.
WORKLOADS = [
    ("short train  (16 pulses, dt=5e-4)", 16, 5e-4),
    ("write train  (16 pulses, dt=5e-5)", 16, 5e-5),
    ("solver curve (64 pulses, dt=5e-5)", 64, 5e-5),
    ("fine ladder  (3300 pulses, dt=1e-3)", 3300, 1e-3),
]


def kernel_args(count: int, dt: float):
    params = DeviceParams()
    wf = pulse_train(replace(PulseTrainSpec(1.2, 0.05, 0.1, 0),
                             count=count), dt)
    return (wf.v, wf.dt, float(params.r_on), float(params.r_off),
            params.v_th_pos, params.v_th_neg, params.k_drift, True,
            0.0, 0.0, 0.0)


def median_time(func, args, repeats: int) -> float:
    func(*args)  # warmup (and JIT compile on the numba path)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        func(*args)
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timed repetitions per case (default 5)")
    args = parser.parse_args()

    if euler_trace_jit is None:
        print("numba not importable; timing the interpreted kernel only")

    header = (f"{'workload':38s} {'samples':>9s} {'python':>10s} "
              f"{'numba':>10s} {'speedup':>8s}")
    print(header)
    print("-" * len(header))
    for label, count, dt in WORKLOADS:
        kargs = kernel_args(count, dt)
        samples = kargs[0].shape[0]
        t_py = median_time(euler_trace_py, kargs, args.repeats)
        if euler_trace_jit is not None:
            t_jit = median_time(euler_trace_jit, kargs, args.repeats)
            slow = euler_trace_py(*kargs)
            fast = euler_trace_jit(*kargs)
            for a, b in zip(slow, fast):
                if a.tobytes() != b.tobytes():
                    raise AssertionError(
                        f"backends disagree on workload {label!r}")
            print(f"{label:38s} {samples:9d} {t_py:10.4f} {t_jit:10.4f} "
                  f"{t_py / t_jit:7.1f}x")
        else:
            print(f"{label:38s} {samples:9d} {t_py:10.4f} {'-':>10s} "
                  f"{'-':>8s}")
    if euler_trace_jit is not None:
        print("traces verified bit-identical across backends")


if __name__ == "__main__":
    main()
