"""Membership-function shapes and the inverse pulse-schedule solver.

This module closes the loop from an analytic membership function to a
programmed crossbar column:

1. sample the shape at the center of every input bin,
2. convert each membership target to a memristance target by inverting
   the conductance rescaling used at readout,
3. search the device's pulse-response curve for the write-pulse count
   whose resulting memristance lands closest to each target,
4. program the column and read it back.

Pulse counts quantize what the column can represent, so achieved
membership values carry a quantization error bounded by the largest
adjacent-count membership gap of the response curve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .crossbar import Crossbar, InputDomain, ReadoutConfig, fuzzify, \
    program_cell
from .device import DeviceParams, fresh_state, memristance, simulate
from .errors import CalibrationError, DomainError
from .pulsegen import PulseTrainSpec, pulse_train, samples_per_interval

REPORT_CSV_HEADER = ("level,target_mu,target_m_ohm,pulses,"
                     "achieved_m_ohm,achieved_mu,abs_error")


@dataclass(frozen=True)
class ShapeSpec:
    """Analytic membership-function shape.

    ``kind`` is one of ``triangular`` (params a <= b <= c, a < c),
    ``trapezoidal`` (a <= b <= c <= d, a < d) or ``gaussian``
    (center, sigma > 0).  Values are always in [0, 1] and the shape
    attains 1 at its peak or plateau.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "params",
                           tuple(float(p) for p in self.params))
        if self.kind == "triangular":
            if len(self.params) != 3:
                raise DomainError("triangular takes (a, b, c)")
            a, b, c = self.params
            if not (a <= b <= c and a < c):
                raise DomainError(
                    f"triangular needs a <= b <= c with a < c, got {self.params}")
        elif self.kind == "trapezoidal":
            if len(self.params) != 4:
                raise DomainError("trapezoidal takes (a, b, c, d)")
            a, b, c, d = self.params
            if not (a <= b <= c <= d and a < d):
                raise DomainError(
                    f"trapezoidal needs a <= b <= c <= d with a < d, "
                    f"got {self.params}")
        elif self.kind == "gaussian":
            if len(self.params) != 2:
                raise DomainError("gaussian takes (center, sigma)")
            if not self.params[1] > 0.0:
                raise DomainError(f"sigma must be positive, got {self.params[1]}")
        else:
            raise DomainError(
                f"unknown shape kind {self.kind!r}; expected triangular, "
                f"trapezoidal or gaussian")

    @classmethod
    def triangular(cls, a: float, b: float, c: float) -> "ShapeSpec":
        return cls("triangular", (a, b, c))

    @classmethod
    def trapezoidal(cls, a: float, b: float, c: float, d: float) -> "ShapeSpec":
        return cls("trapezoidal", (a, b, c, d))

    @classmethod
    def gaussian(cls, center: float, sigma: float) -> "ShapeSpec":
        return cls("gaussian", (center, sigma))

    def evaluate(self, x):
        """Membership value at ``x`` (scalar or ndarray), in [0, 1]."""
        xs = np.asarray(x, dtype=float)
        y = np.zeros(xs.shape if xs.ndim else (1,))
        flat = np.atleast_1d(xs)
        if self.kind == "triangular":
            a, b, c = self.params
            if b > a:
                y = np.where((flat >= a) & (flat < b), (flat - a) / (b - a), y)
            if c > b:
                y = np.where((flat >= b) & (flat <= c), (c - flat) / (c - b), y)
            else:
                y = np.where(flat == b, 1.0, y)
        elif self.kind == "trapezoidal":
            a, b, c, d = self.params
            if b > a:
                y = np.where((flat >= a) & (flat < b), (flat - a) / (b - a), y)
            y = np.where((flat >= b) & (flat <= c), 1.0, y)
            if d > c:
                y = np.where((flat > c) & (flat <= d), (d - flat) / (d - c), y)
        else:
            center, sigma = self.params
            z = (flat - center) / sigma
            y = np.exp(-0.5 * z * z)
        if xs.ndim == 0:
            return float(y[0])
        return y


@dataclass(frozen=True)
class LevelResult:
    """Synthesis outcome for one input level."""

    level: int
    target_mu: float
    target_m: float
    pulses: int
    achieved_m: float
    achieved_mu: float
    abs_error: float


@dataclass(frozen=True)
class SynthesisReport:
    """Per-level synthesis results for one column."""

    levels: list[LevelResult]

    @property
    def pulse_counts(self) -> np.ndarray:
        return np.array([r.pulses for r in self.levels], dtype=int)

    @property
    def target_mu(self) -> np.ndarray:
        return np.array([r.target_mu for r in self.levels])

    @property
    def achieved_mu(self) -> np.ndarray:
        return np.array([r.achieved_mu for r in self.levels])

    @property
    def max_abs_error(self) -> float:
        return max((r.abs_error for r in self.levels), default=0.0)

    def to_csv(self, path) -> None:
        lines = [REPORT_CSV_HEADER]
        for r in self.levels:
            lines.append(
                f"{r.level},{r.target_mu!r},{r.target_m!r},{r.pulses},"
                f"{r.achieved_m!r},{r.achieved_mu!r},{r.abs_error!r}")
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")


def sample_shape(spec: ShapeSpec, domain: InputDomain) -> np.ndarray:
    """Shape values at the center of every domain bin (length = levels)."""
    centers = domain.lo + (np.arange(domain.levels) + 0.5) \
        * (domain.hi - domain.lo) / domain.levels
    return spec.evaluate(centers)


def targets_to_memristance(targets, params: DeviceParams) -> np.ndarray:
    """Invert the readout rescaling: membership targets in [0, 1] to the
    memristance of the cell that would read back exactly that degree.

    The rescaling is affine in conductance, so
    ``g = g_min + mu * (g_max - g_min)`` and the target memristance is
    its reciprocal: mu = 0 -> r_off, mu = 1 -> r_on.
    """
    mu = np.asarray(targets, dtype=float)
    if np.any(mu < 0.0) or np.any(mu > 1.0):
        raise DomainError("membership targets must lie in [0, 1]")
    g_min = 1.0 / params.r_off
    g_max = 1.0 / params.r_on
    return 1.0 / (g_min + mu * (g_max - g_min))


def pulse_response(params: DeviceParams, template: PulseTrainSpec,
                   n_max: int, dt: float) -> np.ndarray:
    """Memristance reached after 0, 1, ..., n_max template pulses.

    One forward simulation of an ``n_max``-pulse train from a fresh
    device, sampled at period boundaries.  Because the sample grid of a
    shorter train is a prefix of the longer one, entry n is bit-identical
    to simulating n pulses from scratch.  ``template.count`` is ignored.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    wf = pulse_train(replace(template, count=n_max), dt)
    trace = simulate(params, fresh_state(params), wf)
    spp = samples_per_interval(template.period, wf.dt)
    idx = np.arange(n_max + 1) * spp
    return memristance(params, trace.x[idx])


def _best_count(curve: np.ndarray, target_m: float) -> int:
    # np.argmin returns the first minimum, which is the tie-break toward
    # the smaller pulse count.
    return int(np.argmin(np.abs(curve - target_m)))


def solve_pulse_schedule(params: DeviceParams, template: PulseTrainSpec,
                         target_m: float, n_max: int, dt: float) -> int:
    """Pulse count whose end-state memristance is closest to the target.

    Exhaustive forward search over 0..n_max pulses applied to a fresh
    device; ties break toward fewer pulses.  The target must lie inside
    [r_on, r_off].

    Parameters
    ----------
    params : DeviceParams
    template : PulseTrainSpec
        Amplitude/width/period of the write train; its count is ignored.
    target_m : float
        Target memristance in ohm.
    n_max : int
        Largest pulse count considered (inclusive).
    dt : float
        Integration step used both here and when later programming.
    """
    if not params.r_on <= target_m <= params.r_off:
        raise DomainError(
            f"target {target_m} ohm outside [{params.r_on}, {params.r_off}]")
    curve = pulse_response(params, template, n_max, dt)
    return _best_count(curve, target_m)


def calibrate_k_drift(params: DeviceParams, template: PulseTrainSpec,
                      n_traverse: int, dt: float,
                      x_saturated: float = 0.999) -> float:
    """Drift coefficient at which exactly ``n_traverse`` template pulses
    saturate a fresh device.

    Bisects k_drift (60 iterations, deterministic) for the smallest value
    whose ``n_traverse``-pulse end state reaches ``x_saturated``; one
    pulse fewer then falls short.  ``params.k_drift`` is ignored.  Raises
    :class:`~memfuzz.errors.CalibrationError` when the search bounds do
    not bracket a solution (for instance a sub-threshold template).
    """
    if n_traverse < 2:
        raise DomainError(f"n_traverse must be >= 2, got {n_traverse}")
    wf = pulse_train(replace(template, count=n_traverse), dt)

    def final_x(k: float) -> float:
        probe = replace(params, k_drift=k)
        return simulate(probe, fresh_state(probe), wf).final_state.x

    # Continuous-drift estimate: traversing the full state range sweeps
    # integral M dx = (r_on + r_off) / 2, delivered over n_traverse
    # pulses of charge ~ amplitude * width / M.
    drive = abs(template.amplitude - template.baseline)
    if drive == 0.0:
        raise CalibrationError("template delivers no drive amplitude")
    k_est = 0.5 * (params.r_on + params.r_off) \
        / (drive * template.width * n_traverse)
    lo = 0.0
    hi = 64.0 * k_est
    if final_x(hi) < x_saturated:
        raise CalibrationError(
            f"search bounds do not bracket saturation at k_drift={hi}; "
            f"is the template amplitude above threshold?")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if final_x(mid) >= x_saturated:
            hi = mid
        else:
            lo = mid
    return hi


def synthesize(xbar: Crossbar, col: int, spec: ShapeSpec,
               domain: InputDomain, template: PulseTrainSpec, n_max: int,
               cfg: ReadoutConfig, dt: float) -> SynthesisReport:
    """Program one column so it stores a membership function.

    For every level: sample the shape at the bin center, convert to a
    memristance target, pick the best pulse count on the shared response
    curve, reset the cell and program it, then read it back through the
    amplifier.  The crossbar is mutated in place; the report records the
    target, the schedule and the achieved membership per level.
    """
    if domain.levels != xbar.rows:
        raise DomainError(
            f"domain has {domain.levels} levels but crossbar has "
            f"{xbar.rows} rows")
    targets = sample_shape(spec, domain)
    target_m = targets_to_memristance(targets, xbar.params)
    curve = pulse_response(xbar.params, template, n_max, dt)
    results = []
    for level in range(domain.levels):
        count = _best_count(curve, float(target_m[level]))
        # Reset-then-write: schedules assume a fresh cell.
        xbar.x[level, col] = 0.0
        xbar.q[level, col] = 0.0
        xbar.phi[level, col] = 0.0
        program_cell(xbar, level, col, replace(template, count=count), dt)
        reading = fuzzify(xbar, col, domain, domain.center(level), cfg)
        achieved_m = float(memristance(xbar.params,
                                       float(xbar.x[level, col])))
        results.append(LevelResult(
            level=level,
            target_mu=float(targets[level]),
            target_m=float(target_m[level]),
            pulses=count,
            achieved_m=achieved_m,
            achieved_mu=reading.mu_rescaled,
            abs_error=abs(reading.mu_rescaled - float(targets[level]))))
    return SynthesisReport(results)
