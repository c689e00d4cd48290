"""Exception types shared across the package."""


class MemfuzzError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MemfuzzError, ValueError):
    """An argument lies outside its documented domain."""


class FormatError(MemfuzzError, ValueError):
    """A waveform or file does not meet its structural contract."""


class ResolutionError(MemfuzzError, ValueError):
    """A requested sample spacing is too coarse for the waveform."""


class CalibrationError(MemfuzzError, RuntimeError):
    """Drift-coefficient calibration could not bracket a solution."""


class ConfigError(MemfuzzError, ValueError):
    """A configuration document is malformed; the message names the key."""


class BackendError(MemfuzzError, RuntimeError):
    """The requested compute backend is unavailable."""
