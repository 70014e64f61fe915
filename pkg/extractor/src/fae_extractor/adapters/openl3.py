"""OpenL3 wrapper (https://github.com/torchopenl3/torchopenl3): music
content type, 6144-d embeddings at a 1 s hop."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class OpenL3Adapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torchopenl3
        except ImportError as exc:
            raise MissingDependencyError(
                "OpenL3 needs torchopenl3: pip install 'fae-extractor[openl3]'"
            ) from exc
        self._torchopenl3 = torchopenl3

    def encode(self, samples: np.ndarray) -> np.ndarray:
        emb, _ = self._torchopenl3.get_audio_embedding(
            samples.astype(np.float32),
            self.spec.input_sample_rate_hz,
            content_type="music",
            embedding_size=self.spec.feature_dim,
            hop_size=1.0 / self.spec.frame_rate_hz,
        )
        return np.asarray(emb.squeeze(0) if emb.ndim == 3 else emb)


def load(spec: EncoderSpec) -> EncoderAdapter:
    return OpenL3Adapter(spec)
