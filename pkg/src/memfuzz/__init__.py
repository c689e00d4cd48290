"""Deterministic simulator of fuzzy membership-function synthesis on
memristive crossbar arrays.

The package models threshold-gated drift memristors, programs them with
counted voltage pulse trains, reads columns through an ideal inverting
summing amplifier, and solves the inverse problem of which pulse
schedule stores a requested membership-function shape.
"""

__version__ = "0.1.0"

from ._kernels import active_backend
from .crossbar import (
    Crossbar,
    InputDomain,
    MembershipReading,
    ReadoutConfig,
    discretize,
    fuzzify,
    membership_sweep,
    new_crossbar,
    program_cell,
    read_column,
    sweep_to_csv,
)
from .device import (
    DEFAULT_K_DRIFT,
    DeviceParams,
    DeviceState,
    Trace,
    TracePoint,
    fresh_state,
    memristance,
    simulate,
    step,
)
from .errors import (
    BackendError,
    CalibrationError,
    ConfigError,
    DomainError,
    FormatError,
    MemfuzzError,
    ResolutionError,
)
from .netlist import export_netlist
from .pulsegen import (
    PulseTrainSpec,
    Waveform,
    pulse_train,
    read_pulse,
    samples_per_interval,
    sine_sweep,
)
from .shapes import (
    LevelResult,
    ShapeSpec,
    SynthesisReport,
    calibrate_k_drift,
    pulse_response,
    sample_shape,
    solve_pulse_schedule,
    synthesize,
    targets_to_memristance,
)
from .cli import Config, load_config, parse_config, run

__all__ = [
    "__version__",
    "active_backend",
    "BackendError",
    "CalibrationError",
    "Config",
    "ConfigError",
    "Crossbar",
    "DEFAULT_K_DRIFT",
    "DeviceParams",
    "DeviceState",
    "DomainError",
    "FormatError",
    "InputDomain",
    "LevelResult",
    "MemfuzzError",
    "MembershipReading",
    "PulseTrainSpec",
    "ReadoutConfig",
    "ResolutionError",
    "ShapeSpec",
    "SynthesisReport",
    "Trace",
    "TracePoint",
    "Waveform",
    "calibrate_k_drift",
    "discretize",
    "export_netlist",
    "fresh_state",
    "fuzzify",
    "load_config",
    "membership_sweep",
    "memristance",
    "new_crossbar",
    "parse_config",
    "program_cell",
    "pulse_response",
    "pulse_train",
    "read_column",
    "read_pulse",
    "run",
    "sample_shape",
    "samples_per_interval",
    "simulate",
    "sine_sweep",
    "solve_pulse_schedule",
    "step",
    "sweep_to_csv",
    "synthesize",
    "targets_to_memristance",
]
