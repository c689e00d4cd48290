"""Command-line front end.

Subcommands
-----------
device-sweep
    Sine-sweep a single device and dump the I-V trace.
program
    Apply per-row write-pulse counts to one crossbar column.
synthesize
    Solve pulse schedules for a membership shape, program a column and
    report the achieved degrees.
fuzzify-sweep
    Read back the membership degree at every input level.
export-netlist
    Emit a SPICE snapshot of the crossbar readout.

Exit codes: 0 on success, 1 for usage errors, 2 for config or domain
errors.  Output files are written only after a run has fully succeeded,
via a temporary file and an atomic rename, so a nonzero exit never leaves
a truncated artifact behind.  Diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, replace

from .crossbar import Crossbar, InputDomain, ReadoutConfig, \
    membership_sweep, new_crossbar, program_cell, sweep_to_csv
from .device import DeviceParams, fresh_state, simulate
from .errors import CalibrationError, ConfigError, DomainError, \
    FormatError, MemfuzzError, ResolutionError
from .netlist import export_netlist
from .pulsegen import PulseTrainSpec, sine_sweep
from .shapes import ShapeSpec, calibrate_k_drift, synthesize
from .svgplot import line_chart


class UsageError(Exception):
    """Command line could not be parsed."""


@dataclass(frozen=True)
class Config:
    """Resolved run configuration (device, pulses, readout, geometry)."""

    device: DeviceParams
    pulses: PulseTrainSpec
    readout: ReadoutConfig
    rows: int
    cols: int
    domain_lo: float
    domain_hi: float

    def to_dict(self) -> dict:
        return {
            "device": {
                "r_on_ohm": self.device.r_on,
                "r_off_ohm": self.device.r_off,
                "v_th_pos_V": self.device.v_th_pos,
                "v_th_neg_V": self.device.v_th_neg,
                "k_drift_perC": self.device.k_drift,
            },
            "pulses": {
                "amplitude_V": self.pulses.amplitude,
                "width_s": self.pulses.width,
                "period_s": self.pulses.period,
            },
            "readout": {
                "r_f_ohm": self.readout.r_f,
                "v_read_V": self.readout.v_read,
            },
            "crossbar": {"rows": self.rows, "cols": self.cols},
            "domain": {"lo": self.domain_lo, "hi": self.domain_hi},
        }


_SCHEMA = {
    "device": {"r_on_ohm", "r_off_ohm", "v_th_pos_V", "v_th_neg_V",
               "k_drift_perC", "calibrate_n"},
    "pulses": {"amplitude_V", "width_s", "period_s"},
    "readout": {"r_f_ohm", "v_read_V"},
    "crossbar": {"rows", "cols"},
    "domain": {"lo", "hi"},
}


def _num(section: dict, section_name: str, key: str, default: float) -> float:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section_name}.{key}: expected a number, "
                          f"got {value!r}")
    return float(value)


def _int(section: dict, section_name: str, key: str, default: int) -> int:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{section_name}.{key}: expected an integer, "
                          f"got {value!r}")
    return value


def parse_config(doc: dict) -> Config:
    """Build a Config from a JSON document, rejecting unknown keys and
    naming the offending key in every complaint."""
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    for section_name, section in doc.items():
        if section_name not in _SCHEMA:
            raise ConfigError(f"unknown key: {section_name}")
        if not isinstance(section, dict):
            raise ConfigError(f"{section_name}: expected an object")
        for key in section:
            if key not in _SCHEMA[section_name]:
                raise ConfigError(f"unknown key: {section_name}.{key}")

    dev = doc.get("device", {})
    r_on = _num(dev, "device", "r_on_ohm", 3000.0)
    r_off = _num(dev, "device", "r_off_ohm", 62000.0)
    v_th_pos = _num(dev, "device", "v_th_pos_V", 1.0)
    v_th_neg = _num(dev, "device", "v_th_neg_V", -1.0)
    if not r_on > 0.0:
        raise ConfigError(f"device.r_on_ohm: must be positive, got {r_on}")
    if not r_off > r_on:
        raise ConfigError(
            f"device.r_off_ohm: must exceed device.r_on_ohm, got {r_off}")
    if not v_th_pos > 0.0:
        raise ConfigError(
            f"device.v_th_pos_V: must be positive, got {v_th_pos}")
    if not v_th_neg < 0.0:
        raise ConfigError(
            f"device.v_th_neg_V: must be negative, got {v_th_neg}")

    pul = doc.get("pulses", {})
    amplitude = _num(pul, "pulses", "amplitude_V", 1.2)
    width = _num(pul, "pulses", "width_s", 0.05)
    period = _num(pul, "pulses", "period_s", 0.1)
    if not width > 0.0:
        raise ConfigError(f"pulses.width_s: must be positive, got {width}")
    if not period > width:
        raise ConfigError(
            f"pulses.period_s: must exceed pulses.width_s, got {period}")
    pulses = PulseTrainSpec(amplitude=amplitude, width=width,
                            period=period, count=0)

    if "k_drift_perC" in dev and "calibrate_n" in dev:
        raise ConfigError(
            "device.calibrate_n: mutually exclusive with device.k_drift_perC")
    if "calibrate_n" in dev:
        n = _int(dev, "device", "calibrate_n", 16)
        if n < 2:
            raise ConfigError(f"device.calibrate_n: must be >= 2, got {n}")
        probe = DeviceParams(r_on=r_on, r_off=r_off, v_th_pos=v_th_pos,
                             v_th_neg=v_th_neg)
        k_drift = calibrate_k_drift(probe, pulses, n, width / 1000.0)
    else:
        k_drift = _num(dev, "device", "k_drift_perC",
                       DeviceParams().k_drift)
        if not k_drift > 0.0:
            raise ConfigError(
                f"device.k_drift_perC: must be positive, got {k_drift}")
    device = DeviceParams(r_on=r_on, r_off=r_off, v_th_pos=v_th_pos,
                          v_th_neg=v_th_neg, k_drift=k_drift)

    rd = doc.get("readout", {})
    r_f = _num(rd, "readout", "r_f_ohm", r_off)
    v_read = _num(rd, "readout", "v_read_V", 0.2)
    if not r_f > 0.0:
        raise ConfigError(f"readout.r_f_ohm: must be positive, got {r_f}")
    if abs(v_read) > min(v_th_pos, -v_th_neg) / 2.0:
        raise ConfigError(
            f"readout.v_read_V: |{v_read}| exceeds half the smaller "
            f"threshold magnitude")
    readout = ReadoutConfig(r_f=r_f, v_read=v_read)

    xb = doc.get("crossbar", {})
    rows = _int(xb, "crossbar", "rows", 8)
    cols = _int(xb, "crossbar", "cols", 1)
    if rows < 1:
        raise ConfigError(f"crossbar.rows: must be >= 1, got {rows}")
    if cols < 1:
        raise ConfigError(f"crossbar.cols: must be >= 1, got {cols}")

    dom = doc.get("domain", {})
    lo = _num(dom, "domain", "lo", 0.0)
    hi = _num(dom, "domain", "hi", 1.0)
    if not lo < hi:
        raise ConfigError(f"domain.hi: must exceed domain.lo, got {hi}")

    return Config(device=device, pulses=pulses, readout=readout,
                  rows=rows, cols=cols, domain_lo=lo, domain_hi=hi)


def load_config(path: str | None) -> Config:
    """Parse a config file; ``None`` yields the full default Config."""
    if path is None:
        return parse_config({})
    try:
        with open(path, "r") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_config(doc)


def _write_text(path: str, text: str) -> None:
    # Full text is assembled first; write to a sibling temp file and
    # rename so failed runs never truncate an existing artifact.
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".memfuzz-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_shape(text: str) -> ShapeSpec:
    """Parse the CLI shape DSL: tri:a,b,c  trap:a,b,c,d  gauss:c,sigma."""
    kind, _, arg_text = text.partition(":")
    kind = kind.strip().lower()
    try:
        args = [float(a) for a in arg_text.split(",")] if arg_text else []
    except ValueError as exc:
        raise ConfigError(f"shape {text!r}: parameters must be numbers") \
            from exc
    if kind in ("tri", "triangular"):
        if len(args) != 3:
            raise ConfigError(f"shape {text!r}: tri takes a,b,c")
        return ShapeSpec.triangular(*args)
    if kind in ("trap", "trapezoidal"):
        if len(args) != 4:
            raise ConfigError(f"shape {text!r}: trap takes a,b,c,d")
        return ShapeSpec.trapezoidal(*args)
    if kind in ("gauss", "gaussian"):
        if len(args) != 2:
            raise ConfigError(f"shape {text!r}: gauss takes center,sigma")
        return ShapeSpec.gaussian(*args)
    raise ConfigError(f"shape {text!r}: unknown kind {kind!r}")


def _parse_counts(text: str, rows: int) -> list[int]:
    try:
        counts = [int(c) for c in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--counts {text!r}: entries must be integers") \
            from exc
    if len(counts) != rows:
        raise ConfigError(
            f"--counts lists {len(counts)} entries but the crossbar has "
            f"{rows} rows")
    if any(c < 0 for c in counts):
        raise ConfigError("--counts entries must be >= 0")
    return counts


def _parse_rows(text: str) -> list[int]:
    try:
        return [int(r) for r in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--active-rows {text!r}: entries must be "
                          f"integers") from exc


def _load_crossbar(args, cfg: Config) -> Crossbar:
    if getattr(args, "state", None):
        return Crossbar.from_state_csv(args.state, cfg.device)
    xbar = new_crossbar(cfg.rows, cfg.cols, cfg.device)
    if getattr(args, "counts", None):
        counts = _parse_counts(args.counts, cfg.rows)
        dt = args.dt or cfg.pulses.width / 1000.0
        for row, count in enumerate(counts):
            program_cell(xbar, row, args.col,
                         replace(cfg.pulses, count=count), dt)
    return xbar


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="memfuzz",
        description="Simulate fuzzy membership functions on a memristive "
                    "crossbar.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def common(p, state=False):
        p.add_argument("--config", help="JSON config file (defaults apply "
                                        "when omitted)")
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--dt", type=float, default=None,
                       help="integration step in seconds "
                            "(default: pulse width / 1000)")
        if state:
            p.add_argument("--state", help="crossbar state CSV to load")

    p = sub.add_parser("device-sweep",
                       help="sine-sweep one device, dump the I-V trace")
    common(p)
    p.add_argument("--amplitude", type=float, default=1.5,
                   help="sweep amplitude in volts (default 1.5)")
    p.add_argument("--freq", type=float, default=1.0,
                   help="sweep frequency in hertz (default 1)")
    p.add_argument("--cycles", type=int, default=2,
                   help="whole cycles to sweep (default 2)")
    p.add_argument("--svg", help="also render the hysteresis loop")

    p = sub.add_parser("program",
                       help="apply per-row pulse counts to one column")
    common(p)
    p.add_argument("--counts", required=True,
                   help="comma-separated pulse count per row")
    p.add_argument("--col", type=int, default=0, help="column (default 0)")

    p = sub.add_parser("synthesize",
                       help="program a column to store a membership shape")
    common(p)
    p.add_argument("--shape", required=True,
                   help="tri:a,b,c | trap:a,b,c,d | gauss:center,sigma")
    p.add_argument("--levels", type=int, default=None,
                   help="input levels / rows (default: crossbar.rows)")
    p.add_argument("--n-max", type=int, default=64,
                   help="largest pulse count considered (default 64)")
    p.add_argument("--state-out", help="also dump the programmed state CSV")
    p.add_argument("--svg", help="also render target vs achieved")

    p = sub.add_parser("fuzzify-sweep",
                       help="read the membership degree at every level")
    common(p, state=True)
    p.add_argument("--counts", help="program a fresh crossbar with these "
                                    "per-row pulse counts first")
    p.add_argument("--col", type=int, default=0, help="column (default 0)")
    p.add_argument("--svg", help="also render membership vs input")

    p = sub.add_parser("export-netlist",
                       help="emit a SPICE snapshot of the readout")
    common(p, state=True)
    p.add_argument("--active-rows",
                   help="comma-separated rows to drive at v_read "
                        "(default: all)")
    return parser


def _cmd_device_sweep(args) -> None:
    cfg = load_config(args.config)
    dt = args.dt or 1.0 / (args.freq * 5000.0)
    wf = sine_sweep(args.amplitude, args.freq, args.cycles, dt)
    trace = simulate(cfg.device, fresh_state(cfg.device), wf)
    lines = ["t_s,v_V,i_A,x,m_ohm"]
    for k in range(len(trace)):
        lines.append(f"{float(trace.t[k])!r},{float(trace.v[k])!r},"
                     f"{float(trace.i[k])!r},{float(trace.x[k])!r},"
                     f"{float(trace.m[k])!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.svg:
        svg = line_chart(trace.v, [("i_A", trace.i)],
                         "device I-V sweep", "v_V", "i_A")
        _write_text(args.svg, svg)


def _cmd_program(args) -> None:
    cfg = load_config(args.config)
    counts = _parse_counts(args.counts, cfg.rows)
    if not 0 <= args.col < cfg.cols:
        raise ConfigError(f"--col {args.col} outside 0..{cfg.cols - 1}")
    xbar = new_crossbar(cfg.rows, cfg.cols, cfg.device)
    dt = args.dt or cfg.pulses.width / 1000.0
    for row, count in enumerate(counts):
        program_cell(xbar, row, args.col, replace(cfg.pulses, count=count),
                     dt)
    lines = ["row,col,x,m_ohm"]
    m = xbar.memristances()
    for r in range(xbar.rows):
        for c in range(xbar.cols):
            lines.append(f"{r},{c},{float(xbar.x[r, c])!r},"
                         f"{float(m[r, c])!r}")
    _write_text(args.out, "\n".join(lines) + "\n")


def _cmd_synthesize(args) -> None:
    cfg = load_config(args.config)
    shape = parse_shape(args.shape)
    levels = args.levels if args.levels is not None else cfg.rows
    if levels < 2:
        raise ConfigError(f"--levels must be >= 2, got {levels}")
    if args.n_max < 0:
        raise ConfigError(f"--n-max must be >= 0, got {args.n_max}")
    domain = InputDomain(cfg.domain_lo, cfg.domain_hi, levels)
    xbar = new_crossbar(levels, 1, cfg.device)
    dt = args.dt or cfg.pulses.width / 1000.0
    report = synthesize(xbar, 0, shape, domain, cfg.pulses, args.n_max,
                        cfg.readout, dt)
    lines = ["level,target_mu,target_m_ohm,pulses,achieved_m_ohm,"
             "achieved_mu,abs_error"]
    for r in report.levels:
        lines.append(f"{r.level},{r.target_mu!r},{r.target_m!r},{r.pulses},"
                     f"{r.achieved_m!r},{r.achieved_mu!r},{r.abs_error!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.state_out:
        state_lines = ["row,col,x,m_ohm"]
        m = xbar.memristances()
        for row in range(xbar.rows):
            state_lines.append(f"{row},0,{float(xbar.x[row, 0])!r},"
                               f"{float(m[row, 0])!r}")
        _write_text(args.state_out, "\n".join(state_lines) + "\n")
    if args.svg:
        levels_axis = [r.level for r in report.levels]
        svg = line_chart(levels_axis,
                         [("target_mu", report.target_mu),
                          ("achieved_mu", report.achieved_mu)],
                         f"membership synthesis ({args.shape})",
                         "level", "mu")
        _write_text(args.svg, svg)


def _cmd_fuzzify_sweep(args) -> None:
    cfg = load_config(args.config)
    xbar = _load_crossbar(args, cfg)
    domain = InputDomain(cfg.domain_lo, cfg.domain_hi, xbar.rows)
    readings = membership_sweep(xbar, args.col, domain, cfg.readout)
    lines = ["level,x_center,v_out_V,mu_raw,mu_rescaled"]
    for reading in readings:
        center = domain.center(reading.row)
        lines.append(f"{reading.row},{center!r},{reading.v_out!r},"
                     f"{reading.mu_raw!r},{reading.mu_rescaled!r}")
    _write_text(args.out, "\n".join(lines) + "\n")
    if args.svg:
        centers = [domain.center(r.row) for r in readings]
        svg = line_chart(centers,
                         [("mu_rescaled", [r.mu_rescaled for r in readings])],
                         "membership sweep", "x", "mu_rescaled")
        _write_text(args.svg, svg)


def _cmd_export_netlist(args) -> None:
    cfg = load_config(args.config)
    xbar = _load_crossbar(args, cfg)
    active = _parse_rows(args.active_rows) if args.active_rows else None
    text = export_netlist(xbar, cfg.readout, active)
    _write_text(args.out, text)


_HANDLERS = {
    "device-sweep": _cmd_device_sweep,
    "program": _cmd_program,
    "synthesize": _cmd_synthesize,
    "fuzzify-sweep": _cmd_fuzzify_sweep,
    "export-netlist": _cmd_export_netlist,
}


def run(argv) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage())
        _HANDLERS[args.command](args)
        return 0
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return int(code) if code else 0
    except (ConfigError, DomainError, FormatError, ResolutionError,
            CalibrationError, MemfuzzError, IndexError, OSError) as exc:
        print(f"memfuzz: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
