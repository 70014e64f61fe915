"""FAEF v1 writer/reader implemented against the published byte layout.

Layout (little-endian): magic ``FAEF``, u32 version (1), f64 frame rate,
u32 dim, u64 frame count, then frames x dim float32 row-major. This module
is the extractor's side of the wire format; the benchmark harness has its
own reader, and the two interoperate file-for-file.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"FAEF"
VERSION = 1
_HEADER = struct.Struct("<4sIdIQ")
HEADER_SIZE = _HEADER.size


def write_faef(path: str | Path, frame_rate_hz: float, data: np.ndarray) -> int:
    """Write one feature matrix; returns the byte count."""
    data = np.asarray(data)
    if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
        raise ValueError(f"feature matrix must be N x Z with N,Z >= 1, got {data.shape}")
    if not np.all(np.isfinite(data)):
        raise ValueError("feature matrix contains NaN or Inf")
    payload = np.ascontiguousarray(data, dtype="<f4").tobytes()
    header = _HEADER.pack(MAGIC, VERSION, float(frame_rate_hz), data.shape[1], data.shape[0])
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)
    return len(header) + len(payload)


def read_faef(path: str | Path) -> tuple[float, np.ndarray]:
    """Read one feature file; returns (frame_rate_hz, frames x dim float32)."""
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_SIZE:
        raise FormatError(f"truncated header, file has {len(raw)} bytes", offset=len(raw))
    magic, version, frame_rate, dim, frames = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    expected = HEADER_SIZE + frames * dim * 4
    if len(raw) < expected:
        raise FormatError(f"truncated payload, {len(raw)} of {expected} bytes", offset=len(raw))
    data = np.frombuffer(raw, dtype="<f4", count=frames * dim, offset=HEADER_SIZE)
    return frame_rate, data.reshape(frames, dim).copy()


def read_header(path: str | Path) -> tuple[float, int, int]:
    """Read just (frame_rate_hz, dim, frames) from a feature file."""
    with open(path, "rb") as fh:
        raw = fh.read(HEADER_SIZE)
    if len(raw) < HEADER_SIZE:
        raise FormatError(f"truncated header, got {len(raw)} bytes", offset=len(raw))
    magic, version, frame_rate, dim, frames = _HEADER.unpack(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    return frame_rate, dim, frames
