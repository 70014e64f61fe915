"""PaSST wrapper (https://github.com/kkoutini/PaSST) via hear21passt.
The published interface exposes timestamped embeddings; the layer is not
selectable, so features are used as-is (sidecar layer = none)."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class PasstAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torch
            from hear21passt.base import get_timestamp_embeddings, load_model
        except ImportError as exc:
            raise MissingDependencyError(
                "PaSST needs hear21passt: pip install 'fae-extractor[passt]'"
            ) from exc
        try:
            self._model = load_model(mode="embed_only", timestamp_hop=50).eval()
        except Exception as exc:
            raise MissingDependencyError("cannot load the PaSST checkpoint") from exc
        self._get_timestamp_embeddings = get_timestamp_embeddings
        self._torch = torch

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        wav = torch.from_numpy(samples[None, :].astype(np.float32))
        with torch.no_grad():
            emb, _ = self._get_timestamp_embeddings(wav, self._model)
        return emb.squeeze(0).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    return PasstAdapter(spec)
