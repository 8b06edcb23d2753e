"""Deterministic CSV reports with a ``#``-prefixed header block.

The header echoes the artifact version, the full configuration, and any
experiment-level summary values; data rows follow a fixed column row.
Floats are printed with 17 significant digits, so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .config import RunConfig, config_lines, format_float

ARTIFACT = "nlslab 0.1.0"


@dataclass
class Report:
    """Header metadata plus fixed-column rows for one experiment."""

    title: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    config: RunConfig | None = None
    passed: bool | None = None

    def add_row(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} values, got {len(values)}")
        self.rows.append(list(values))

    def render(self) -> str:
        out = io.StringIO()
        out.write(f"# artifact = {ARTIFACT}\n")
        out.write(f"# report = {self.title}\n")
        if self.config is not None:
            for line in config_lines(self.config):
                out.write(f"# {line}\n")
        for key, value in self.summary.items():
            out.write(f"# {key} = {_cell(value)}\n")
        if self.passed is not None:
            out.write(f"# passed = {self.passed}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(_cell(v) for v in row) + "\n")
        return out.getvalue()

    def write(self, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())


def _cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return "none"
    return str(value)


DIAGNOSTIC_COLUMNS = [
    "t",
    "mass",
    "energy",
    "modified_energy",
    "hs_norm",
    "hhalf_norm",
    "boundary_mass",
    "max_abs",
]
