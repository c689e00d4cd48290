"""Threshold-gated drift model of a single memristive device.

The device is a two-terminal resistor whose memristance interpolates
linearly between a low-resistance bound ``r_on`` (fully doped, state
``x = 1``) and a high-resistance bound ``r_off`` (undoped, ``x = 0``)::

    M(x) = x * r_on + (1 - x) * r_off,   x in [0, 1]

The internal state drifts in proportion to the charge that has flowed
through the device, ``dx/dt = k_drift * i(t)``, with ``k_drift`` lumping
the dopant mobility and geometry into a single coefficient of dimension
1/coulomb.  A pair of threshold voltages gates the drift: drive samples
inside the closed interval ``[v_th_neg, v_th_pos]`` conduct current but
leave the state untouched, which is what makes low-voltage readout
non-destructive.

Integration is explicit Euler on the waveform's uniform sample grid; the
hot loop lives in :mod:`memfuzz._kernels` and runs compiled when numba is
available.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import euler_trace
from .errors import DomainError
from .pulsegen import Waveform

#: Drift coefficient (1/C) at which sixteen 1.2 V, 50 ms write pulses of a
#: 100 ms-period train drive a fresh device from r_off into saturation
#: (x >= 0.999) at the default step dt = width / 1000.  Matches
#: calibrate_k_drift(n_traverse=16) for the default write template.
DEFAULT_K_DRIFT = 33854.19097726962

TRACE_CSV_HEADER = "t_s,v_V,i_A,x,m_ohm"


@dataclass(frozen=True)
class DeviceParams:
    """Static parameters of one device.

    Parameters
    ----------
    r_on : float
        Low memristance bound in ohm, reached at x = 1.
    r_off : float
        High memristance bound in ohm, reached at x = 0.
    v_th_pos, v_th_neg : float
        Threshold voltages in volt.  With ``gated`` set, samples inside
        the closed interval [v_th_neg, v_th_pos] do not move the state.
    k_drift : float
        Drift coefficient in 1/coulomb.
    gated : bool
        Disable to integrate the ungated drift law (every sample moves
        the state regardless of amplitude).
    """

    r_on: float = 3000.0
    r_off: float = 62000.0
    v_th_pos: float = 1.0
    v_th_neg: float = -1.0
    k_drift: float = DEFAULT_K_DRIFT
    gated: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.r_on < self.r_off:
            raise DomainError(
                f"require 0 < r_on < r_off, got r_on={self.r_on}, "
                f"r_off={self.r_off}")
        if not self.v_th_neg < 0.0 < self.v_th_pos:
            raise DomainError(
                f"require v_th_neg < 0 < v_th_pos, got "
                f"[{self.v_th_neg}, {self.v_th_pos}]")
        if not self.k_drift > 0.0:
            raise DomainError(f"require k_drift > 0, got {self.k_drift}")


@dataclass(frozen=True)
class DeviceState:
    """Dynamic state: normalized dopant position plus accumulated
    charge and flux (the time integrals of current and voltage)."""

    x: float = 0.0
    q: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.x <= 1.0:
            raise DomainError(f"state x must lie in [0, 1], got {self.x}")


@dataclass(frozen=True)
class TracePoint:
    """One simulated sample: time, drive voltage, current, state and
    memristance.  ``i == v / m`` holds exactly at every point."""

    t: float
    v: float
    i: float
    x: float
    m: float


class Trace:
    """Per-sample simulation record.

    Behaves as a sequence of :class:`TracePoint`; the underlying numpy
    columns (``t``, ``v``, ``i``, ``x``, ``m`` plus the bookkeeping
    integrals ``q`` and ``phi``) are exposed directly for vectorized
    inspection.  The final device state is recoverable from the last
    sample via :attr:`final_state`.
    """

    __slots__ = ("t", "v", "i", "x", "m", "q", "phi")

    def __init__(self, t, v, i, x, m, q, phi):
        self.t = t
        self.v = v
        self.i = i
        self.x = x
        self.m = m
        self.q = q
        self.phi = phi

    def __len__(self) -> int:
        return self.t.shape[0]

    def __getitem__(self, k: int) -> TracePoint:
        return TracePoint(float(self.t[k]), float(self.v[k]),
                          float(self.i[k]), float(self.x[k]),
                          float(self.m[k]))

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    @property
    def final_state(self) -> DeviceState:
        return DeviceState(x=float(self.x[-1]), q=float(self.q[-1]),
                           phi=float(self.phi[-1]))

    def to_csv(self, path) -> None:
        """Write the trace as ``t_s,v_V,i_A,x,m_ohm`` rows."""
        lines = [TRACE_CSV_HEADER]
        for k in range(len(self)):
            lines.append(
                f"{float(self.t[k])!r},{float(self.v[k])!r},"
                f"{float(self.i[k])!r},{float(self.x[k])!r},"
                f"{float(self.m[k])!r}")
        text = "\n".join(lines) + "\n"
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def memristance(params: DeviceParams, x):
    """Memristance in ohm at state ``x``.

    Accepts a scalar or an ndarray; raises
    :class:`~memfuzz.errors.DomainError` when any value leaves [0, 1].
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0) or np.any(x_arr > 1.0):
        raise DomainError(f"state x must lie in [0, 1], got {x}")
    m = x_arr * params.r_on + (1.0 - x_arr) * params.r_off
    if x_arr.ndim == 0:
        return float(m)
    return m


def fresh_state(params: DeviceParams) -> DeviceState:
    """Unprogrammed device: x = 0, i.e. memristance r_off."""
    return DeviceState(x=0.0, q=0.0, phi=0.0)


def step(params: DeviceParams, state: DeviceState, v: float,
         dt: float) -> DeviceState:
    """Advance the state one explicit-Euler step of length ``dt``.

    The current is evaluated at the pre-step state, the increment is
    hard-clamped into [0, 1], and the charge/flux integrals advance with
    the same pre-step values.  Sub-threshold samples of a gated device
    leave ``x`` untouched (bit-identical).
    """
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    m = state.x * params.r_on + (1.0 - state.x) * params.r_off
    cur = v / m
    x = state.x
    if (not params.gated) or v > params.v_th_pos or v < params.v_th_neg:
        x = x + params.k_drift * cur * dt
        if x > 1.0:
            x = 1.0
        elif x < 0.0:
            x = 0.0
    return DeviceState(x=x, q=state.q + cur * dt, phi=state.phi + v * dt)


def simulate(params: DeviceParams, state: DeviceState,
             waveform: Waveform) -> Trace:
    """Drive the device with a waveform and record one sample per point.

    Parameters
    ----------
    params : DeviceParams
    state : DeviceState
        Initial state; the trace's first sample reports it unchanged.
    waveform : Waveform
        Uniformly sampled drive.  The nominal ``waveform.dt`` is used as
        the step for every interval.

    Returns
    -------
    Trace
        One point per waveform sample; ``trace.final_state`` is the
        state after integrating the whole waveform.
    """
    v = np.ascontiguousarray(waveform.v, dtype=float)
    i_out, x_out, q_out, phi_out = euler_trace(
        v, waveform.dt, params.r_on, params.r_off, params.v_th_pos,
        params.v_th_neg, params.k_drift, params.gated,
        state.x, state.q, state.phi)
    m_out = x_out * params.r_on + (1.0 - x_out) * params.r_off
    return Trace(waveform.t, v, i_out, x_out, m_out, q_out, phi_out)
