"""Published characteristics of the supported pretrained audio encoders.

Each entry records what the released model emits (frame rate, feature
dimension, Transformer layer used for probing where applicable), its input
sample rate, and the clip length it was trained on, which is also the
chunk size used for inference. Clip-level encoders produce one vector per
input clip.

The ``mock`` encoders are deterministic signal-statistics stand-ins for
offline tests of the extraction pipeline; they need no weights.
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
    adapter: str = ""


REGISTRY: dict[str, EncoderSpec] = {
    spec.model_id: spec
    for spec in (
        EncoderSpec("musicfm-fma", 25.0, 1024, 24000, 30.0, layer=8, adapter="musicfm"),
        EncoderSpec("musicfm-msd", 25.0, 1024, 24000, 30.0, layer=8, adapter="musicfm"),
        EncoderSpec("mert-95m", 75.0, 768, 24000, 5.0, layer=8, adapter="mert"),
        EncoderSpec("mert-330m", 75.0, 1024, 24000, 5.0, layer=14, adapter="mert"),
        EncoderSpec("audiomae-huang", 6.25, 768, 16000, 10.0, layer=12, adapter="audiomae"),
        EncoderSpec("audiomae-zhong", 6.25, 3840, 16000, 5.0, layer=12, adapter="audiomae"),
        EncoderSpec("audiomae-huang-ft", 6.25, 768, 16000, 10.0, layer=12, adapter="audiomae"),
        EncoderSpec("audiomae-zhong-ft", 6.25, 3840, 16000, 5.0, layer=11, adapter="audiomae"),
        EncoderSpec("mule", 0.5, 1728, 16000, 3.0, adapter="mule"),
        EncoderSpec("encodec-24khz", 75.0, 128, 24000, 1.0, adapter="encodec"),
        EncoderSpec("encodec-48khz", 150.0, 128, 48000, 1.0, adapter="encodec"),
        EncoderSpec("dac", 86.0, 1024, 44100, 0.38, adapter="dac"),
        EncoderSpec("panns", 0.1, 2048, 32000, 10.0, clip_level=True, adapter="panns"),
        EncoderSpec("panns-sed", 3.125, 2048, 32000, 10.0, adapter="panns"),
        EncoderSpec("passt", 20.0, 768, 32000, 10.0, adapter="passt"),
        EncoderSpec("clap-music-audioset", 0.1, 512, 48000, 10.0, clip_level=True, adapter="clap"),
        EncoderSpec(
            "clap-music-speech-audioset", 0.1, 512, 48000, 10.0, clip_level=True, adapter="clap"
        ),
        EncoderSpec("openl3", 1.0, 6144, 48000, 1.0, adapter="openl3"),
        # Offline test encoders.
        EncoderSpec("mock", 25.0, 32, 16000, 5.0, adapter="mock"),
        EncoderSpec("mock-clip", 0.1, 16, 16000, 10.0, clip_level=True, adapter="mock"),
    )
}


def get_spec(model_id: str) -> EncoderSpec:
    try:
        return REGISTRY[model_id]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise KeyError(f"unknown model id {model_id!r}; known: {known}") from None
