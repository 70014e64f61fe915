"""WAV loading and resampling for encoder input preparation."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import scipy.io.wavfile
import scipy.signal

from .errors import ExtractionError


def load_wav(path: str | Path) -> tuple[np.ndarray, int]:
    """Load a WAV file as mono float64 in [-1, 1]; returns (samples, rate)."""
    try:
        rate, data = scipy.io.wavfile.read(str(path))
    except Exception as exc:
        raise ExtractionError(f"cannot decode {path}: {exc}") from exc
    data = np.asarray(data)
    if data.ndim == 2:
        data = data.mean(axis=1)
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / 32768.0
    elif data.dtype == np.int32:
        samples = data.astype(np.float64) / 2147483648.0
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    else:
        samples = data.astype(np.float64)
    if samples.size == 0:
        raise ExtractionError(f"{path}: empty audio")
    return samples, int(rate)


def resample(samples: np.ndarray, rate: int, target_rate: int) -> np.ndarray:
    """Polyphase resampling to the encoder's input rate."""
    if rate == target_rate:
        return samples
    g = math.gcd(rate, target_rate)
    return scipy.signal.resample_poly(samples, target_rate // g, rate // g)
