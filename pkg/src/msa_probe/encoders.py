"""Inventory of the supported pretrained audio encoders.

Frame rate and feature dimension are what each published model emits;
clip-level encoders produce one vector per input clip and are only usable
with sliding-window pooling enabled.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EncoderSpec:
    model_id: str
    frame_rate_hz: float
    feature_dim: int
    input_sample_rate_hz: int
    input_length_s: float
    layer: int | None = None
    clip_level: bool = False


ENCODERS: dict[str, EncoderSpec] = {
    spec.model_id: spec
    for spec in (
        EncoderSpec("musicfm-fma", 25.0, 1024, 24000, 30.0, layer=8),
        EncoderSpec("musicfm-msd", 25.0, 1024, 24000, 30.0, layer=8),
        EncoderSpec("mert-95m", 75.0, 768, 24000, 5.0, layer=8),
        EncoderSpec("mert-330m", 75.0, 1024, 24000, 5.0, layer=14),
        EncoderSpec("audiomae-huang", 6.25, 768, 16000, 10.0, layer=12),
        EncoderSpec("audiomae-zhong", 6.25, 3840, 16000, 5.0, layer=12),
        EncoderSpec("audiomae-huang-ft", 6.25, 768, 16000, 10.0, layer=12),
        EncoderSpec("audiomae-zhong-ft", 6.25, 3840, 16000, 5.0, layer=11),
        EncoderSpec("mule", 0.5, 1728, 16000, 3.0),
        EncoderSpec("encodec-24khz", 75.0, 128, 24000, 1.0),
        EncoderSpec("encodec-48khz", 150.0, 128, 48000, 1.0),
        EncoderSpec("dac", 86.0, 1024, 44100, 0.38),
        EncoderSpec("panns", 0.1, 2048, 32000, 10.0, clip_level=True),
        EncoderSpec("panns-sed", 3.125, 2048, 32000, 10.0),
        EncoderSpec("passt", 20.0, 768, 32000, 10.0),
        EncoderSpec("clap-music-audioset", 0.1, 512, 48000, 10.0, clip_level=True),
        EncoderSpec("clap-music-speech-audioset", 0.1, 512, 48000, 10.0, clip_level=True),
        EncoderSpec("openl3", 1.0, 6144, 48000, 1.0),
    )
}


def is_clip_level(model_id: str) -> bool:
    """True for encoders that emit one vector per clip. Unknown model ids
    (synthetic corpora, custom encoders) are treated as frame-wise."""
    spec = ENCODERS.get(model_id)
    return spec.clip_level if spec is not None else False
