"""Drive waveform construction: pulse trains, read pulses, sine sweeps.

All constructors return a :class:`Waveform`, a uniformly sampled voltage
sequence starting at t = 0.  The requested ``dt`` acts as an upper bound
on the sample spacing: the grid snaps to an integer number of samples per
period (or per pulse width, or per sine cycle) so that trains concatenate
exactly and whole sine cycles integrate to zero flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, FormatError, ResolutionError

WAVEFORM_CSV_HEADER = "t_s,v_V"

# Relative slack when comparing a requested dt against its resolution
# bound, so that dt == width/10 passes despite float rounding.
_REL_EPS = 1e-9


@dataclass(frozen=True, eq=False)
class Waveform:
    """Uniformly sampled voltage drive.

    ``t`` holds strictly increasing timestamps starting at 0 with spacing
    ``dt`` (uniform to one part in 1e9); ``v`` holds one voltage per
    timestamp.  Violations raise :class:`~memfuzz.errors.FormatError`.
    """

    t: np.ndarray
    v: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        t = np.asarray(self.t, dtype=float)
        v = np.asarray(self.v, dtype=float)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "v", v)
        if t.ndim != 1 or v.ndim != 1 or t.shape != v.shape:
            raise FormatError("t and v must be 1-D arrays of equal length")
        if t.shape[0] < 1:
            raise FormatError("a waveform needs at least one sample")
        if not self.dt > 0.0:
            raise FormatError(f"dt must be positive, got {self.dt}")
        if t[0] != 0.0:
            raise FormatError(f"timestamps must start at 0, got {t[0]}")
        if t.shape[0] > 1:
            d = np.diff(t)
            if np.any(d <= 0.0):
                raise FormatError("timestamps must be strictly increasing")
            if np.max(np.abs(d - self.dt)) > 1e-9 * self.dt:
                raise FormatError(
                    "sample spacing must be uniform to 1 part in 1e9")

    @property
    def duration(self) -> float:
        return float(self.t[-1])

    def __len__(self) -> int:
        return self.t.shape[0]

    def to_csv(self, path) -> None:
        lines = [WAVEFORM_CSV_HEADER]
        for k in range(len(self)):
            lines.append(f"{float(self.t[k])!r},{float(self.v[k])!r}")
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class PulseTrainSpec:
    """Rectangular pulse train: ``count`` pulses of ``width`` seconds at
    ``amplitude`` volts, repeating every ``period`` seconds, resting at
    ``baseline`` volts in between."""

    amplitude: float
    width: float
    period: float
    count: int
    baseline: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 < self.width < self.period:
            raise DomainError(
                f"require 0 < width < period, got width={self.width}, "
                f"period={self.period}")
        if self.count < 0:
            raise DomainError(f"count must be >= 0, got {self.count}")


def samples_per_interval(interval: float, dt: float) -> int:
    """Number of grid samples covering ``interval`` at requested spacing
    ``dt``: exact divisors are kept, otherwise the grid densifies so the
    effective spacing never exceeds the request."""
    ratio = interval / dt
    n = int(round(ratio))
    if n >= 1 and abs(ratio - n) <= 1e-9 * ratio:
        return n
    return int(math.ceil(ratio))


def pulse_train(spec: PulseTrainSpec, dt: float) -> Waveform:
    """Sample a rectangular pulse train on a uniform grid.

    The waveform spans ``count`` full periods (duration
    ``count * period``); sample k is at ``amplitude`` while its time
    modulo the period falls inside the pulse width, at ``baseline``
    otherwise.  A zero-count spec yields a single t = 0 sample at
    baseline.  ``dt`` must resolve the pulse: dt <= width / 10.
    """
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    if dt > spec.width / 10.0 * (1.0 + _REL_EPS):
        raise ResolutionError(
            f"dt={dt} too coarse for pulse width {spec.width}; "
            f"need dt <= width/10")
    spp = samples_per_interval(spec.period, dt)
    dt_eff = spec.period / spp
    if spec.count == 0:
        return Waveform(np.zeros(1), np.array([spec.baseline], dtype=float),
                        dt_eff)
    on = int(round(spec.width / dt_eff))
    k = np.arange(spec.count * spp + 1)
    v = np.where(k % spp < on, spec.amplitude, spec.baseline)
    return Waveform(k * dt_eff, v.astype(float), dt_eff)


def read_pulse(v_read: float, width: float, dt: float) -> Waveform:
    """Single rectangular pulse of amplitude ``v_read`` and the given
    width, followed by one trailing baseline sample."""
    if not width > 0.0:
        raise DomainError(f"width must be positive, got {width}")
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    if dt > width / 10.0 * (1.0 + _REL_EPS):
        raise ResolutionError(
            f"dt={dt} too coarse for pulse width {width}; need dt <= width/10")
    on = samples_per_interval(width, dt)
    dt_eff = width / on
    k = np.arange(on + 1)
    v = np.where(k < on, v_read, 0.0)
    return Waveform(k * dt_eff, v, dt_eff)


def sine_sweep(amplitude: float, freq: float, cycles: int,
               dt: float) -> Waveform:
    """Sinusoidal sweep ``v(t) = amplitude * sin(2 pi freq t)`` spanning
    ``cycles`` whole periods.

    The grid snaps to an integer number of samples per cycle, so the
    left-endpoint flux integral over the sweep cancels to numerical
    noise.  Requires dt <= 1 / (1000 * freq).
    """
    if not freq > 0.0:
        raise DomainError(f"freq must be positive, got {freq}")
    if cycles < 1:
        raise DomainError(f"cycles must be >= 1, got {cycles}")
    if not dt > 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    period = 1.0 / freq
    if dt > period / 1000.0 * (1.0 + _REL_EPS):
        raise ResolutionError(
            f"dt={dt} too coarse for frequency {freq}; "
            f"need dt <= 1/(1000*freq)")
    spc = samples_per_interval(period, dt)
    dt_eff = period / spc
    t = np.arange(cycles * spc + 1) * dt_eff
    v = amplitude * np.sin(2.0 * math.pi * freq * t)
    return Waveform(t, v, dt_eff)
