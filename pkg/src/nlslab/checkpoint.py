"""Binary field checkpoints.

Layout (all little-endian): magic ``NLSF``, version as u32, then d and n as
u32, box side L and time t as f64, then ``n^d`` complex values as
consecutive (real, imaginary) f64 pairs in row-major order.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import CheckpointError
from .grid import PHYSICAL, Field, GridSpec, make_grid

MAGIC = b"NLSF"
VERSION = 1
_HEADER = struct.Struct("<4sIIIdd")


def write_checkpoint(f: Field, t: float, path: str) -> None:
    phys_values = f.values  # stored on whichever side the caller holds
    if f.side != PHYSICAL:
        raise CheckpointError("checkpoints store physical-side fields")
    header = _HEADER.pack(MAGIC, VERSION, f.grid.d, f.grid.n, f.grid.L, t)
    payload = np.ascontiguousarray(phys_values, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_checkpoint(path: str) -> tuple[Field, float]:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise CheckpointError("truncated header")
        magic, version, d, n, L, t = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise CheckpointError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CheckpointError(f"unsupported version {version}")
        grid = make_grid(d, n, L)
        payload = fh.read(16 * grid.size)
        if len(payload) != 16 * grid.size:
            raise CheckpointError("truncated payload")
        values = np.frombuffer(payload, dtype="<c16").reshape(grid.shape)
    return Field(grid=grid, values=values, side=PHYSICAL), t
