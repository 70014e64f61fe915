"""MULE wrapper (https://github.com/PandoraMedia/music-audio-representations).
The released model runs through the repo's ``mule`` package (TensorFlow);
embeddings come out at 0.5 Hz, 1728-d."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class MuleAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            from mule.analysis import Analysis  # noqa: F401
        except ImportError as exc:
            raise MissingDependencyError(
                "MULE needs the github.com/PandoraMedia/music-audio-representations "
                "package (pip install sxmp-mule) and its released model files"
            ) from exc
        from mule.analysis import Analysis

        try:
            self._analysis = Analysis("supporting_data/configs/mule_embedding_timeline.yml")
        except Exception as exc:
            raise MissingDependencyError(
                "cannot load the MULE embedding config; run from a checkout of the "
                "music-audio-representations repository"
            ) from exc

    def encode(self, samples: np.ndarray) -> np.ndarray:
        features = self._analysis.analyze_data(
            samples.astype(np.float32), self.spec.input_sample_rate_hz
        )
        return np.asarray(features.data.T)


def load(spec: EncoderSpec) -> EncoderAdapter:
    return MuleAdapter(spec)
