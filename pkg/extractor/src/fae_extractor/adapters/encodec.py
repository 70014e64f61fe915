"""EnCodec wrappers (https://github.com/facebookresearch/encodec), loaded
through the transformers ports facebook/encodec_24khz and
facebook/encodec_48khz.

Features are decoder-side continuous embeddings: the encoder latents are
passed through residual vector quantization at the selected bandwidth and
dequantized back to continuous vectors. Bandwidth matters only on this
path (it sets the number of codebooks), which is how per-bitrate feature
variants arise; set ENCODEC_BANDWIDTH_KBPS (default 24). The sidecar
records stage and bandwidth.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter

_CHECKPOINTS = {
    "encodec-24khz": "facebook/encodec_24khz",
    "encodec-48khz": "facebook/encodec_48khz",
}


class EncodecAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torch
            from transformers import EncodecModel
        except ImportError as exc:
            raise MissingDependencyError(
                "EnCodec needs torch + transformers: pip install 'fae-extractor[transformers]'"
            ) from exc
        name = _CHECKPOINTS[spec.model_id]
        try:
            self._model = EncodecModel.from_pretrained(name).eval()
        except Exception as exc:
            raise MissingDependencyError(f"cannot load {name} from the Hugging Face hub") from exc
        self._torch = torch
        self._bandwidth = float(os.environ.get("ENCODEC_BANDWIDTH_KBPS", "24"))
        self.sidecar_notes = {
            "codec_stage": "post-quantization decoder-side embeddings",
            "bandwidth_kbps": self._bandwidth,
        }

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        wav = torch.from_numpy(np.ascontiguousarray(samples, dtype=np.float32))
        channels = self._model.config.audio_channels
        wav = wav[None, None, :].repeat(1, channels, 1)
        with torch.no_grad():
            latents = self._model.encoder(wav)
            codes = self._model.quantizer.encode(latents, bandwidth=self._bandwidth)
            quantized = self._model.quantizer.decode(codes)
        return quantized.squeeze(0).transpose(0, 1).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    return EncodecAdapter(spec)
