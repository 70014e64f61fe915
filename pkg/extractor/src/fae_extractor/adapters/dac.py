"""Descript audio codec wrapper
(https://github.com/descriptinc/descript-audio-codec). Features are the
quantized continuous latents (decoder-side input), matching the codec's
operating point at its full bandwidth."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class DacAdapter(EncoderAdapter):
    sidecar_notes = {"codec_stage": "post-quantization decoder-side embeddings"}

    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import dac
            import torch
        except ImportError as exc:
            raise MissingDependencyError(
                "DAC needs torch + descript-audio-codec: pip install 'fae-extractor[dac]'"
            ) from exc
        try:
            self._model = dac.DAC.load(dac.utils.download(model_type="44khz")).eval()
        except Exception as exc:
            raise MissingDependencyError("cannot download the 44khz DAC checkpoint") from exc
        self._torch = torch

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        wav = torch.from_numpy(np.ascontiguousarray(samples, dtype=np.float32))[None, None, :]
        with torch.no_grad():
            wav = self._model.preprocess(wav, self.spec.input_sample_rate_hz)
            z, *_ = self._model.encode(wav)
        return z.squeeze(0).transpose(0, 1).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    return DacAdapter(spec)
