"""MERT wrappers (https://github.com/yizhilll/MERT), loaded through the
Hugging Face checkpoints m-a-p/MERT-v1-95M and m-a-p/MERT-v1-330M."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter

_CHECKPOINTS = {
    "mert-95m": "m-a-p/MERT-v1-95M",
    "mert-330m": "m-a-p/MERT-v1-330M",
}


class MertAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torch
            from transformers import AutoModel, Wav2Vec2FeatureExtractor
        except ImportError as exc:
            raise MissingDependencyError(
                "MERT needs torch + transformers: pip install 'fae-extractor[transformers]'"
            ) from exc
        name = _CHECKPOINTS[spec.model_id]
        try:
            self._model = AutoModel.from_pretrained(name, trust_remote_code=True).eval()
            self._processor = Wav2Vec2FeatureExtractor.from_pretrained(name, trust_remote_code=True)
        except Exception as exc:
            raise MissingDependencyError(
                f"cannot load {name}; download the checkpoint from the Hugging Face hub"
            ) from exc
        self._torch = torch

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        inputs = self._processor(
            samples, sampling_rate=self.spec.input_sample_rate_hz, return_tensors="pt"
        )
        with torch.no_grad():
            out = self._model(**inputs, output_hidden_states=True)
        # hidden_states[0] is the convolutional front end; Transformer layer
        # k of the published numbering is hidden_states[k].
        hidden = out.hidden_states[self.spec.layer]
        return hidden.squeeze(0).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    return MertAdapter(spec)
