"""SPICE netlist export of a crossbar readout snapshot.

The netlist freezes each cell at its present memristance (a plain
resistor) and wires every column into an ideal inverting amplifier built
from a high-gain VCVS with a feedback resistor, so an external circuit
simulator reproduces ``read_column`` at the operating point.
"""

from __future__ import annotations

from . import __version__
from .crossbar import Crossbar, ReadoutConfig

# Open-loop gain of the VCVS standing in for an ideal op-amp.
_OPAMP_GAIN = 1e9


def export_netlist(xbar: Crossbar, cfg: ReadoutConfig,
                   active_rows=None) -> str:
    """Render the crossbar and its column amplifiers as a SPICE netlist.

    Rows in ``active_rows`` are driven at ``cfg.v_read``; the rest are
    held at 0 V.  ``None`` drives every row.  The text is line-oriented
    and newline-terminated, deterministic for a fixed crossbar state.
    """
    if active_rows is None:
        active = set(range(xbar.rows))
    else:
        active = set(int(r) for r in active_rows)
        for r in active:
            if not 0 <= r < xbar.rows:
                raise IndexError(f"row {r} outside 0..{xbar.rows - 1}")
    p = xbar.params
    m = xbar.memristances()
    lines = [
        f"* memfuzz {__version__} crossbar readout snapshot",
        f"* rows={xbar.rows} cols={xbar.cols} r_on={p.r_on!r} "
        f"r_off={p.r_off!r} v_read={cfg.v_read!r} r_f={cfg.r_f!r}",
        f"* active rows: {','.join(str(r) for r in sorted(active)) or 'none'}",
        "* cells are static resistors at their programmed memristance;",
        "* each column feeds an ideal inverting summing amplifier.",
    ]
    for r in range(xbar.rows):
        drive = cfg.v_read if r in active else 0.0
        lines.append(f"Vrow{r} row{r} 0 DC {float(drive)!r}")
    for c in range(xbar.cols):
        for r in range(xbar.rows):
            lines.append(
                f"Rcell_{r}_{c} row{r} sum{c} {float(m[r, c])!r}")
    if cfg.r_c is not None:
        lines.append(f"Vbias bias 0 DC {float(cfg.v_c)!r}")
        for c in range(xbar.cols):
            lines.append(f"Rc{c} bias sum{c} {float(cfg.r_c)!r}")
    for c in range(xbar.cols):
        lines.append(f"Rf{c} sum{c} out{c} {float(cfg.r_f)!r}")
        lines.append(f"Eop{c} out{c} 0 0 sum{c} {_OPAMP_GAIN!r}")
    lines.append(".op")
    lines.append(".end")
    return "\n".join(lines) + "\n"
