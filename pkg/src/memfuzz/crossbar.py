"""Crossbar array of drift devices with summing-amplifier readout.

A crossbar holds a rows-by-cols grid of device states backed by numpy
arrays.  Cells are written by replaying pulse trains through the device
model (:func:`program_cell`) and read by an ideal inverting summing
amplifier: every active row is driven at ``v_read`` and the selected
column's currents meet in the amplifier's virtual ground, so

    v_out = -r_f * (sum_j v_read / M_j  [+ v_c / r_c])

with the optional ``r_c`` branch injecting a constant bias.  Readout is
algebraic: it never advances any cell state, mirroring sub-threshold,
non-destructive reads of the physical array.

Fuzzification maps a crisp input to a row index by uniform binning of the
input domain, reads that row's column response and rescales the cell's
conductance into a [0, 1] membership degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device import DeviceParams, DeviceState, memristance, simulate
from .errors import DomainError, FormatError
from .pulsegen import PulseTrainSpec, pulse_train

STATE_CSV_HEADER = "row,col,x,m_ohm"
SWEEP_CSV_HEADER = "level,x_center,v_out_V,mu_raw,mu_rescaled"


@dataclass(frozen=True)
class ReadoutConfig:
    """Summing-amplifier readout parameters.

    ``r_f`` is the feedback resistance, ``v_read`` the row drive.  The
    optional constant branch (``r_c`` from a bias source ``v_c``) adds a
    state-independent term to the column sum.
    """

    r_f: float
    v_read: float
    r_c: float | None = None
    v_c: float = 0.0

    def __post_init__(self) -> None:
        if not self.r_f > 0.0:
            raise DomainError(f"r_f must be positive, got {self.r_f}")
        if self.r_c is not None and not self.r_c > 0.0:
            raise DomainError(f"r_c must be positive, got {self.r_c}")


@dataclass(frozen=True)
class InputDomain:
    """Closed input interval [lo, hi] split into ``levels`` uniform bins."""

    lo: float
    hi: float
    levels: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"require lo < hi, got [{self.lo}, {self.hi}]")
        if self.levels < 2:
            raise DomainError(f"levels must be >= 2, got {self.levels}")

    def center(self, level: int) -> float:
        """Midpoint of bin ``level``."""
        if not 0 <= level < self.levels:
            raise IndexError(f"level {level} outside 0..{self.levels - 1}")
        return self.lo + (level + 0.5) * (self.hi - self.lo) / self.levels


@dataclass(frozen=True)
class MembershipReading:
    """Result of fuzzifying one crisp input: selected row, amplifier
    output and the raw/rescaled membership degrees."""

    row: int
    v_out: float
    mu_raw: float
    mu_rescaled: float


class Crossbar:
    """Grid of device states; mutated only by :func:`program_cell`."""

    def __init__(self, rows: int, cols: int, params: DeviceParams):
        if rows < 1 or cols < 1:
            raise DomainError(
                f"crossbar needs rows >= 1 and cols >= 1, got {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self.params = params
        self.x = np.zeros((rows, cols))
        self.q = np.zeros((rows, cols))
        self.phi = np.zeros((rows, cols))

    def _check_cell(self, row: int, col: int) -> None:
        if not 0 <= row < self.rows:
            raise IndexError(f"row {row} outside 0..{self.rows - 1}")
        if not 0 <= col < self.cols:
            raise IndexError(f"col {col} outside 0..{self.cols - 1}")

    def state_at(self, row: int, col: int) -> DeviceState:
        self._check_cell(row, col)
        return DeviceState(x=float(self.x[row, col]),
                           q=float(self.q[row, col]),
                           phi=float(self.phi[row, col]))

    def memristances(self) -> np.ndarray:
        """Memristance of every cell, shape (rows, cols)."""
        return memristance(self.params, self.x)

    def to_state_csv(self, path) -> None:
        """Dump every cell as ``row,col,x,m_ohm``, row-major."""
        m = self.memristances()
        lines = [STATE_CSV_HEADER]
        for r in range(self.rows):
            for c in range(self.cols):
                lines.append(
                    f"{r},{c},{float(self.x[r, c])!r},{float(m[r, c])!r}")
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def from_state_csv(cls, path, params: DeviceParams) -> "Crossbar":
        """Rebuild a crossbar from a state dump.

        The ``x`` column is authoritative (memristance is recomputed);
        charge/flux bookkeeping restarts at zero.  Every (row, col) pair
        up to the maximum indices must be present exactly once.
        """
        entries: dict[tuple[int, int], float] = {}
        with open(path, "r") as fh:
            header = fh.readline().strip()
            if header != STATE_CSV_HEADER:
                raise FormatError(
                    f"expected header {STATE_CSV_HEADER!r}, got {header!r}")
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 4:
                    raise FormatError(f"line {lineno}: expected 4 fields")
                try:
                    r, c, x = int(parts[0]), int(parts[1]), float(parts[2])
                except ValueError as exc:
                    raise FormatError(f"line {lineno}: {exc}") from exc
                if (r, c) in entries:
                    raise FormatError(f"line {lineno}: duplicate cell ({r},{c})")
                entries[(r, c)] = x
        if not entries:
            raise FormatError("state file holds no cells")
        rows = max(r for r, _ in entries) + 1
        cols = max(c for _, c in entries) + 1
        if len(entries) != rows * cols:
            raise FormatError(
                f"state file must cover all {rows}x{cols} cells, "
                f"got {len(entries)}")
        xbar = cls(rows, cols, params)
        for (r, c), x in entries.items():
            if not 0.0 <= x <= 1.0:
                raise DomainError(f"cell ({r},{c}) state {x} outside [0, 1]")
            xbar.x[r, c] = x
        return xbar


def new_crossbar(rows: int, cols: int, params: DeviceParams) -> Crossbar:
    """Fresh array: every cell starts at x = 0 (memristance r_off)."""
    return Crossbar(rows, cols, params)


def program_cell(xbar: Crossbar, row: int, col: int, spec: PulseTrainSpec,
                 dt: float) -> Crossbar:
    """Apply a pulse train to one cell, leaving all others untouched.

    The train is replayed through the device model from the cell's
    current state; the crossbar is mutated in place and returned.  A
    zero-count train leaves the cell bit-identical.
    """
    xbar._check_cell(row, col)
    wf = pulse_train(spec, dt)
    final = simulate(xbar.params, xbar.state_at(row, col), wf).final_state
    xbar.x[row, col] = final.x
    xbar.q[row, col] = final.q
    xbar.phi[row, col] = final.phi
    return xbar


def _check_read(xbar: Crossbar, cfg: ReadoutConfig) -> None:
    limit = min(xbar.params.v_th_pos, -xbar.params.v_th_neg) / 2.0
    if abs(cfg.v_read) > limit * (1.0 + 1e-12):
        raise DomainError(
            f"|v_read|={abs(cfg.v_read)} exceeds the sub-threshold read "
            f"limit {limit} (half the smaller threshold magnitude)")


def read_column(xbar: Crossbar, col: int, active_rows, cfg: ReadoutConfig) -> float:
    """Ideal inverting summing-amplifier response of one column.

    Every row in ``active_rows`` is driven at ``cfg.v_read``; inactive
    rows are grounded and contribute nothing.  Cell states are not
    modified.  Raises if the read drive is not sub-threshold.
    """
    rows = sorted(set(int(r) for r in active_rows))
    if not rows:
        raise DomainError("active_rows must be a nonempty set of row indices")
    if not 0 <= col < xbar.cols:
        raise IndexError(f"col {col} outside 0..{xbar.cols - 1}")
    for r in rows:
        if not 0 <= r < xbar.rows:
            raise IndexError(f"row {r} outside 0..{xbar.rows - 1}")
    _check_read(xbar, cfg)
    total = 0.0
    for r in rows:
        m = float(xbar.x[r, col]) * xbar.params.r_on \
            + (1.0 - float(xbar.x[r, col])) * xbar.params.r_off
        total += cfg.v_read / m
    if cfg.r_c is not None:
        total += cfg.v_c / cfg.r_c
    return -cfg.r_f * total


def discretize(domain: InputDomain, x: float) -> int:
    """Uniform-bin index of ``x`` in the domain.

    Bins are half-open with lower edges inclusive; the upper domain
    bound maps to the last bin.  Inputs outside [lo, hi] raise
    :class:`~memfuzz.errors.DomainError`.
    """
    if not domain.lo <= x <= domain.hi:
        raise DomainError(
            f"input {x} outside domain [{domain.lo}, {domain.hi}]")
    idx = int(math.floor((x - domain.lo) / (domain.hi - domain.lo)
                         * domain.levels))
    if idx >= domain.levels:
        idx = domain.levels - 1
    if idx < 0:
        idx = 0
    return idx


def fuzzify(xbar: Crossbar, col: int, domain: InputDomain, x: float,
            cfg: ReadoutConfig) -> MembershipReading:
    """Membership degree of crisp input ``x`` against one stored column.

    The input selects a row by discretization; that row alone is read.
    ``mu_raw`` normalizes the amplifier output by the full-scale read
    response ``v_read * r_off / r_on``; ``mu_rescaled`` maps the cell's
    conductance affinely so that r_off -> 0 and r_on -> 1.
    """
    if domain.levels != xbar.rows:
        raise DomainError(
            f"domain has {domain.levels} levels but crossbar has "
            f"{xbar.rows} rows")
    row = discretize(domain, x)
    v_out = read_column(xbar, col, {row}, cfg)
    p = xbar.params
    mu_raw = abs(v_out) / (cfg.v_read * p.r_off / p.r_on)
    g = 1.0 / float(memristance(p, float(xbar.x[row, col])))
    g_min = 1.0 / p.r_off
    g_max = 1.0 / p.r_on
    mu_rescaled = (g - g_min) / (g_max - g_min)
    return MembershipReading(row=row, v_out=v_out, mu_raw=mu_raw,
                             mu_rescaled=mu_rescaled)


def membership_sweep(xbar: Crossbar, col: int, domain: InputDomain,
                     cfg: ReadoutConfig) -> list[MembershipReading]:
    """Fuzzify the center of every bin in order; one reading per level."""
    return [fuzzify(xbar, col, domain, domain.center(level), cfg)
            for level in range(domain.levels)]


def sweep_to_csv(readings: list[MembershipReading], domain: InputDomain,
                 path) -> None:
    """Write a membership sweep as
    ``level,x_center,v_out_V,mu_raw,mu_rescaled`` rows."""
    lines = [SWEEP_CSV_HEADER]
    for reading in readings:
        center = domain.center(reading.row)
        lines.append(
            f"{reading.row},{center!r},{reading.v_out!r},"
            f"{reading.mu_raw!r},{reading.mu_rescaled!r}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
