"""Run configuration: a closed key set in diffable ``key = value`` text.

Lines are ``key = value``; ``#`` starts a comment; lists are
comma-separated.  Unknown keys and malformed lines are reported with their
line number.  An empty file yields the all-defaults configuration, and
writing then parsing reproduces a configuration exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .errors import ConfigError

_CHECK_NAMES = ("bernstein", "sandwich", "dispersive", "morawetz", "commutator")
_EXPERIMENTS = ("simulate", "sweep-n", "scatter", "check")
_DATA_KINDS = ("gaussian", "rough")


@dataclass(frozen=True)
class RunConfig:
    """All knobs for one experiment run."""

    dimension: int = 2
    grid_n: int = 128
    box_size: float = 32.0
    p: float = 4.0
    lambda1: float = 1.0
    p2: float | None = None
    lambda2: float = 0.0
    dt: float = 1e-3
    time_horizon: float = 1.0
    record_every: int = 10
    cutoff_n: float = 16.0
    sobolev_s: float = 0.8
    eta: float = 0.5
    sweep_n: tuple[float, ...] = (4.0, 8.0, 16.0, 32.0)
    seed: int = 20260810
    amplitude: float = 1.0
    width: float = 1.0
    data: str = "gaussian"
    experiment: str = "simulate"
    checks: tuple[str, ...] = _CHECK_NAMES
    windows: int = 8
    jobs: int = 1
    out: str | None = None

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2):
            raise ConfigError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.data not in _DATA_KINDS:
            raise ConfigError(f"data must be one of {_DATA_KINDS}, got {self.data!r}")
        if self.experiment not in _EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {_EXPERIMENTS}, got {self.experiment!r}")
        for c in self.checks:
            if c not in _CHECK_NAMES:
                raise ConfigError(f"unknown check {c!r}; choose from {_CHECK_NAMES}")
        if not self.eta > 0:
            raise ConfigError(f"eta must be positive, got {self.eta}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")


_DEFAULTS = RunConfig()


def _parse_value(key: str, raw: str, line_no: int):
    raw = raw.strip()
    default = getattr(_DEFAULTS, key)
    try:
        if key in ("p2", "out"):
            if raw.lower() in ("none", ""):
                return None
            return raw if key == "out" else float(raw)
        if key == "sweep_n":
            return tuple(float(v.strip()) for v in raw.split(",") if v.strip())
        if key == "checks":
            return tuple(v.strip() for v in raw.split(",") if v.strip())
        if isinstance(default, bool):
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"cannot parse value for {key!r}: {raw!r} ({exc})", line=line_no)


def parse_config_text(text: str) -> RunConfig:
    valid = {f.name for f in fields(RunConfig)}
    overrides = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", line=line_no)
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in valid:
            raise ConfigError(f"unknown key {key!r}", line=line_no)
        overrides[key] = _parse_value(key, raw, line_no)
    return RunConfig(**overrides)


def parse_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def config_lines(cfg: RunConfig) -> list[str]:
    """One ``key = value`` line per field, in declaration order."""
    return [f"{f.name} = {_format_value(getattr(cfg, f.name))}" for f in fields(RunConfig)]


def write_config(cfg: RunConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(config_lines(cfg)) + "\n")


def format_float(x: float) -> str:
    """17 significant digits: round-trips any double exactly."""
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def with_overrides(cfg: RunConfig, **kwargs) -> RunConfig:
    return replace(cfg, **kwargs)
