"""Chunked feature extraction: audio file -> FAEF file + JSON sidecar."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .adapters import load_adapter
from .adapters.base import EncoderAdapter
from .audio import load_wav, resample
from .errors import SpecMismatchError
from .faef import write_faef
from .specs import EncoderSpec, get_spec

POOL_WINDOW_S = 5.0
POOL_HOP_S = 0.5
FRAME_COUNT_TOLERANCE = 2


@dataclass(frozen=True)
class ExtractResult:
    faef_path: Path
    sidecar_path: Path
    frames: int
    dim: int
    frame_rate_hz: float
    duration_s: float


def _chunks(samples: np.ndarray, chunk_samples: int):
    for start in range(0, len(samples), chunk_samples):
        chunk = samples[start : start + chunk_samples]
        if len(chunk) > 0:
            yield chunk


def _encode_chunked(adapter: EncoderAdapter, samples: np.ndarray, spec: EncoderSpec) -> np.ndarray:
    chunk_samples = max(1, round(spec.input_length_s * spec.input_sample_rate_hz))
    pieces = [np.atleast_2d(adapter.encode(chunk)) for chunk in _chunks(samples, chunk_samples)]
    return np.vstack(pieces)


def _encode_pooled(adapter: EncoderAdapter, samples: np.ndarray, spec: EncoderSpec) -> np.ndarray:
    """Re-encode every 5 s window with a 0.5 s hop and average each window's
    frames: pooled 2 Hz pseudo-features straight from the encoder."""
    sr = spec.input_sample_rate_hz
    duration = len(samples) / sr
    count = max(1, math.ceil(duration / POOL_HOP_S - 1e-9))
    rows = []
    for i in range(count):
        a = min(round(i * POOL_HOP_S * sr), len(samples) - 1)
        b = min(round((i * POOL_HOP_S + POOL_WINDOW_S) * sr), len(samples))
        window = samples[a:max(b, a + 1)]
        rows.append(np.atleast_2d(adapter.encode(window)).mean(axis=0))
    return np.stack(rows)


def extract(
    model_id: str,
    audio_path: str | Path,
    out_path: str | Path,
    reencode_pooling: bool = False,
    adapter: EncoderAdapter | None = None,
) -> ExtractResult:
    """Run one encoder over one audio file and write FAEF + sidecar.

    Audio is resampled to the encoder's input rate and processed in chunks
    of its native training length; Transformer models contribute the
    published probing layer. Output frame rate and dimension are checked
    against the encoder's spec (hard error on mismatch).
    """
    spec = get_spec(model_id)
    if adapter is None:
        adapter = load_adapter(spec)
    samples, rate = load_wav(audio_path)
    samples = resample(samples, rate, spec.input_sample_rate_hz)
    duration = len(samples) / spec.input_sample_rate_hz

    if reencode_pooling:
        data = _encode_pooled(adapter, samples, spec)
        frame_rate = 1.0 / POOL_HOP_S
    else:
        data = _encode_chunked(adapter, samples, spec)
        frame_rate = spec.frame_rate_hz

    if data.shape[1] != spec.feature_dim:
        raise SpecMismatchError(
            f"{model_id}: encoder emitted dim {data.shape[1]}, spec says {spec.feature_dim}"
        )
    expected = duration * frame_rate
    if abs(data.shape[0] - expected) > FRAME_COUNT_TOLERANCE + 0.5:
        raise SpecMismatchError(
            f"{model_id}: {data.shape[0]} frames for {duration:.2f}s audio, "
            f"expected ~{expected:.1f} at {frame_rate} Hz"
        )

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_faef(out_path, frame_rate, data)
    sidecar = {
        "model_id": model_id,
        "layer": spec.layer,
        "source_audio": str(Path(audio_path).resolve()),
        "extraction_tool_version": __version__,
        "reencode_pooling": reencode_pooling,
    }
    sidecar.update(getattr(adapter, "sidecar_notes", {}))
    sidecar_path = out_path.with_name(out_path.name + ".json")
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    return ExtractResult(
        faef_path=out_path,
        sidecar_path=sidecar_path,
        frames=data.shape[0],
        dim=data.shape[1],
        frame_rate_hz=frame_rate,
        duration_s=duration,
    )
