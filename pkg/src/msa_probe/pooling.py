"""Time-axis pooling: sliding-window averaging and adaptive average pooling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import frame_count, round_half_up_array
from .errors import ValidationError
from .featurestore import FeatureMatrix


@dataclass(frozen=True)
class PoolingSpec:
    """Sliding-window pooling parameters: 5 s windows with a 0.5 s hop
    produce 2 Hz pseudo-features from any input frame rate."""

    window_s: float = 5.0
    hop_s: float = 0.5
    enabled: bool = True

    def __post_init__(self):
        if not (self.hop_s > 0 and self.window_s >= self.hop_s):
            raise ValidationError(f"need window_s >= hop_s > 0, got {self.window_s}, {self.hop_s}")


def sliding_pool(m: FeatureMatrix, spec: PoolingSpec = PoolingSpec()) -> FeatureMatrix:
    """Average input rows over sliding windows of spec.window_s every spec.hop_s.

    Output frame i averages input rows [round(i*hop*fr), round((i*hop+window)*fr))
    clipped to [0, N); rounding is half-up and window starts are clamped to
    N-1 so trailing windows shrink but never vanish. Output frame rate is
    1/hop_s; output row count is ceil(N / (hop_s * fr)).
    """
    n, fr = m.frames, m.frame_rate_hz
    count = frame_count(n / fr, 1.0 / spec.hop_s)
    i = np.arange(count, dtype=np.float64)
    starts = np.minimum(round_half_up_array(i * spec.hop_s * fr), n - 1)
    ends = np.minimum(round_half_up_array((i * spec.hop_s + spec.window_s) * fr), n)
    ends = np.maximum(ends, starts + 1)
    csum = np.vstack([np.zeros((1, m.dim)), np.cumsum(m.data.astype(np.float64), axis=0)])
    out = (csum[ends] - csum[starts]) / (ends - starts)[:, None]
    return FeatureMatrix(frame_rate_hz=1.0 / spec.hop_s, data=out)


def adaptive_avg_pool(x: np.ndarray, t: int) -> np.ndarray:
    """Resample an N x Z matrix to T x Z by averaging near-uniform bins.

    Output row i averages input rows [floor(i*N/T), ceil((i+1)*N/T)); when
    N <= T the overlapping bins duplicate rows. Matches the standard
    adaptive-average-pooling convention.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValidationError(f"expected non-empty N x Z input, got shape {x.shape}")
    if t < 1:
        raise ValidationError(f"target length must be >= 1, got {t}")
    n = x.shape[0]
    i = np.arange(t, dtype=np.int64)
    starts = (i * n) // t
    ends = -((-(i + 1) * n) // t)
    csum = np.vstack([np.zeros((1, x.shape[1])), np.cumsum(x, axis=0)])
    return (csum[ends] - csum[starts]) / (ends - starts)[:, None]
