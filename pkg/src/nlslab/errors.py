"""Exception types shared across the package."""


class NlsLabError(Exception):
    """Base class for all package-specific errors."""


class SideMismatchError(NlsLabError):
    """A field was supplied on the wrong side (physical vs spectral)."""


class DegenerateInputError(NlsLabError):
    """An operation received input on which it is undefined (e.g. zero field)."""


class SupportOverflowError(NlsLabError):
    """Rescaled data no longer fits the periodic box within tolerance."""


class BoundaryMassError(NlsLabError):
    """Initial data carries too much mass near the box boundary."""


class RevivalContaminationError(NlsLabError):
    """Dispersed mass has wrapped around the periodic box, so whole-space
    quantities computed on the torus are no longer trustworthy."""


class IndivisibleSampleError(NlsLabError):
    """A single time sample already exceeds the smallness threshold."""


class BlowUpError(NlsLabError):
    """The discrete evolution produced non-finite or runaway amplitudes."""

    def __init__(self, message: str, last_good_time: float):
        super().__init__(message)
        self.last_good_time = last_good_time


class ConfigError(NlsLabError):
    """Malformed run configuration file."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class CheckpointError(NlsLabError):
    """Corrupt or incompatible checkpoint file."""
