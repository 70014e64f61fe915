"""Deterministic offline encoder for pipeline tests.

Features are fixed linear projections of simple per-frame signal
statistics, so identical audio always yields identical embeddings and no
weights are needed.
"""

from __future__ import annotations

import hashlib

import numpy as np

from ..specs import EncoderSpec
from .base import EncoderAdapter

_STATS = 6


def _frame_stats(window: np.ndarray) -> np.ndarray:
    if window.size == 0:
        window = np.zeros(1)
    diffs = np.diff(np.signbit(window).astype(np.int8)) if window.size > 1 else np.zeros(1)
    return np.array(
        [
            window.mean(),
            window.std(),
            np.sqrt(np.mean(window**2)),
            window.max(),
            window.min(),
            np.abs(diffs).mean(),
        ]
    )


class MockAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        # Stable per-model seed (not Python's randomized str hash).
        seed = int.from_bytes(hashlib.sha256(spec.model_id.encode()).digest()[:4], "little")
        rng = np.random.default_rng(seed)
        self._proj = rng.standard_normal((spec.feature_dim, _STATS))

    def encode(self, samples: np.ndarray) -> np.ndarray:
        sr = self.spec.input_sample_rate_hz
        if self.spec.clip_level:
            stats = _frame_stats(samples)[None, :]
        else:
            n_frames = max(1, round(len(samples) / sr * self.spec.frame_rate_hz))
            edges = np.linspace(0, len(samples), n_frames + 1).astype(int)
            stats = np.stack([_frame_stats(samples[a:b]) for a, b in zip(edges, edges[1:])])
        return stats @ self._proj.T


def load(spec: EncoderSpec) -> EncoderAdapter:
    return MockAdapter(spec)
