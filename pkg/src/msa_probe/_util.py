"""Small numeric helpers shared across modules."""

from __future__ import annotations

import math

import numpy as np

# All structure labels live on a 2 Hz grid (0.5 s label frames).
LABEL_RATE_HZ = 2.0

# Slack for float ceils so that e.g. 59.999999999999996 counts as 60 frames.
_CEIL_EPS = 1e-9


def round_half_up(x: float) -> int:
    """Round to the nearest integer, halves away from zero toward +inf."""
    return int(math.floor(x + 0.5))


def round_half_up_array(x: np.ndarray) -> np.ndarray:
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def frame_count(duration_s: float, rate_hz: float) -> int:
    """Number of frames covering ``duration_s`` at ``rate_hz`` (ceiling)."""
    return max(1, int(math.ceil(duration_s * rate_hz - _CEIL_EPS)))


def label_frame_count(duration_s: float) -> int:
    """Number of 2 Hz label frames covering a track of the given duration."""
    return frame_count(duration_s, LABEL_RATE_HZ)
