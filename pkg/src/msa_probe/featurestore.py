"""FAEF v1 feature files and a synthetic-track generator for desk-scale tests.

FAEF v1 layout (all little-endian):

    bytes 0-3    magic ``FAEF``
    bytes 4-7    u32 version (1)
    bytes 8-15   f64 frame_rate_hz
    bytes 16-19  u32 feature dim
    bytes 20-27  u64 frame count
    bytes 28-    frames x dim float32, row-major

The format is self-describing and trivially parseable from any language;
an optional JSON sidecar ``<name>.faef.json`` records provenance
(model_id, layer, source_audio, extraction_tool_version).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import BinaryIO

import numpy as np

from ._util import frame_count
from .annotations import NUM_CLASSES, FunctionClass, SegmentAnnotation
from .errors import FormatError, ValidationError

MAGIC = b"FAEF"
VERSION = 1
_HEADER = struct.Struct("<4sIdIQ")
HEADER_SIZE = _HEADER.size  # 28 bytes


@dataclass
class FeatureMatrix:
    """A frames x dims embedding matrix with frame-rate metadata.

    Rows are time frames. Data may be float32 (as stored on disk) or
    float64 (as produced by in-memory transforms); writing always stores
    float32.
    """

    frame_rate_hz: float
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data)
        if self.data.ndim != 2 or self.data.shape[0] < 1 or self.data.shape[1] < 1:
            raise ValidationError(f"feature data must be N x Z with N,Z >= 1, got shape {self.data.shape}")
        if not (self.frame_rate_hz > 0 and np.isfinite(self.frame_rate_hz)):
            raise ValidationError(f"frame rate must be finite and > 0, got {self.frame_rate_hz}")
        if not np.all(np.isfinite(self.data)):
            raise ValidationError("feature data contains NaN or Inf")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    @property
    def duration_s(self) -> float:
        return self.frames / self.frame_rate_hz


def write_features(m: FeatureMatrix, sink: BinaryIO) -> int:
    """Write a FAEF v1 stream; returns the number of bytes written."""
    payload = np.ascontiguousarray(m.data, dtype="<f4").tobytes()
    header = _HEADER.pack(MAGIC, VERSION, float(m.frame_rate_hz), m.dim, m.frames)
    sink.write(header)
    sink.write(payload)
    return len(header) + len(payload)


def read_features(source: BinaryIO) -> FeatureMatrix:
    """Read one FAEF v1 stream. read(write(m)) is bit-exact for float32 data."""
    header = source.read(HEADER_SIZE)
    if len(header) < HEADER_SIZE:
        raise FormatError(f"truncated header, got {len(header)} of {HEADER_SIZE} bytes", offset=len(header))
    magic, version, frame_rate, dim, frames = _HEADER.unpack(header)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if dim < 1:
        raise FormatError(f"dim must be >= 1, got {dim}", offset=16)
    if frames < 1:
        raise FormatError(f"frame count must be >= 1, got {frames}", offset=20)
    expected = frames * dim * 4
    payload = source.read(expected)
    if len(payload) < expected:
        raise FormatError(
            f"truncated payload, got {len(payload)} of {expected} bytes",
            offset=HEADER_SIZE + len(payload),
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(frames, dim)
    return FeatureMatrix(frame_rate_hz=frame_rate, data=data.copy())


def write_features_file(m: FeatureMatrix, path: str | Path) -> int:
    with open(path, "wb") as fh:
        return write_features(m, fh)


def read_features_file(path: str | Path) -> FeatureMatrix:
    with open(path, "rb") as fh:
        return read_features(fh)


@dataclass(frozen=True)
class SynthConfig:
    """Configuration for the synthetic track generator."""

    dim: int = 16
    frame_rate_hz: float = 2.0
    n_segments_range: tuple[int, int] = (4, 8)
    segment_len_range_s: tuple[float, float] = (10.0, 40.0)
    class_count: int = NUM_CLASSES
    noise_std: float = 0.3
    seed: int = 0
    # Height of the feature pulse injected at interior segment starts, along
    # a latent direction orthogonal to every class mean. Without it a purely
    # frame-wise model has no way to localize section onsets in synthetic
    # data, so the end-to-end benchmark would test nothing about boundaries.
    # 2.5 puts the pulse ~8 sigma above the benchmark noise level.
    boundary_pulse: float = 2.5

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("dim must be >= 1")
        if not (self.frame_rate_hz > 0):
            raise ValidationError("frame rate must be > 0")
        lo, hi = self.n_segments_range
        if not (1 <= lo <= hi):
            raise ValidationError(f"bad n_segments_range {self.n_segments_range}")
        slo, shi = self.segment_len_range_s
        if not (0 < slo <= shi):
            raise ValidationError(f"bad segment_len_range_s {self.segment_len_range_s}")
        if self.class_count != NUM_CLASSES:
            raise ValidationError(f"class_count must be {NUM_CLASSES}")
        if not (self.noise_std >= 0 and np.isfinite(self.noise_std)):
            raise ValidationError(f"noise_std must be finite and >= 0, got {self.noise_std}")
        if self.seed < 0:
            raise ValidationError("seed must be >= 0")
        if not (self.boundary_pulse >= 0 and np.isfinite(self.boundary_pulse)):
            raise ValidationError(f"boundary_pulse must be finite and >= 0, got {self.boundary_pulse}")


# Seed for the latent class geometry. Fixed (independent of SynthConfig.seed)
# so every synthetic track shares the same class means and training can
# generalize across tracks.
_LATENT_SEED = 0xFAEF


@lru_cache(maxsize=None)
def _latent_vectors(dim: int) -> np.ndarray:
    """(NUM_CLASSES + 1) x dim unit vectors: one mean per class + pulse direction.

    Orthonormal when dim allows it, otherwise normalized random (distinct
    with probability 1). Deterministic in dim.
    """
    rng = np.random.default_rng(_LATENT_SEED)
    n = NUM_CLASSES + 1
    if dim >= n:
        a = rng.standard_normal((dim, n))
        q, _ = np.linalg.qr(a)
        vecs = q[:, :n].T
    else:
        vecs = rng.standard_normal((n, dim))
        vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return np.ascontiguousarray(vecs)


def class_means(dim: int) -> np.ndarray:
    """The fixed unit-norm latent mean vector of each class, NUM_CLASSES x dim."""
    return _latent_vectors(dim)[:NUM_CLASSES].copy()


def synth_track(cfg: SynthConfig) -> tuple[FeatureMatrix, SegmentAnnotation]:
    """Generate one synthetic (features, annotation) pair.

    Segment count, durations, and classes come from a generator seeded with
    cfg.seed; per-frame features are the containing segment's class mean
    plus N(0, noise_std^2) noise, with a pulse of height cfg.boundary_pulse
    added at the frame nearest each interior segment start. Identical
    configs produce bit-identical output.
    """
    rng = np.random.default_rng(cfg.seed)
    lo, hi = cfg.n_segments_range
    k = int(rng.integers(lo, hi + 1))
    durs = rng.uniform(cfg.segment_len_range_s[0], cfg.segment_len_range_s[1], size=k)
    classes = rng.integers(0, NUM_CLASSES, size=k)
    starts = np.concatenate([[0.0], np.cumsum(durs)[:-1]])
    duration = float(np.sum(durs))
    segments = tuple(
        (float(s), FunctionClass(int(c))) for s, c in zip(starts, classes)
    )
    ann = SegmentAnnotation(segments=segments, duration_s=duration)

    vecs = _latent_vectors(cfg.dim)
    means, pulse_dir = vecs[:NUM_CLASSES], vecs[NUM_CLASSES]
    n = frame_count(duration, cfg.frame_rate_hz)
    centers = (np.arange(n, dtype=np.float64) + 0.5) / cfg.frame_rate_hz
    data = means[ann.class_at(centers)].astype(np.float64)
    if cfg.boundary_pulse > 0:
        for start in starts[1:]:
            j = min(int(np.floor(start * cfg.frame_rate_hz + 0.5)), n - 1)
            data[j] += cfg.boundary_pulse * pulse_dir
    data += rng.normal(0.0, cfg.noise_std, size=(n, cfg.dim)) if cfg.noise_std > 0 else 0.0
    return FeatureMatrix(frame_rate_hz=cfg.frame_rate_hz, data=data.astype(np.float32)), ann
