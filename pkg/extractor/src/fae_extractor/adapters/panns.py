"""PANNs wrappers (https://github.com/qiuqiangkong/audioset_tagging_cnn)
via the panns-inference package: the tagging model yields one 2048-d
embedding per clip; the sound-event-detection model yields frame-wise
embeddings at 3.125 Hz (Cnn14_DecisionLevelMax, 320 ms frames)."""

from __future__ import annotations

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class PannsTaggingAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            from panns_inference import AudioTagging
        except ImportError as exc:
            raise MissingDependencyError(
                "PANNs needs panns-inference: pip install 'fae-extractor[panns]'"
            ) from exc
        try:
            self._model = AudioTagging(checkpoint_path=None, device="cpu")
        except Exception as exc:
            raise MissingDependencyError("cannot load the PANNs Cnn14 checkpoint") from exc

    def encode(self, samples: np.ndarray) -> np.ndarray:
        _, embedding = self._model.inference(samples[None, :].astype(np.float32))
        return np.asarray(embedding)


class PannsSedAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torch
            from panns_inference import SoundEventDetection
        except ImportError as exc:
            raise MissingDependencyError(
                "PANNs needs panns-inference: pip install 'fae-extractor[panns]'"
            ) from exc
        try:
            self._model = SoundEventDetection(checkpoint_path=None, device="cpu")
        except Exception as exc:
            raise MissingDependencyError(
                "cannot load the PANNs Cnn14_DecisionLevelMax checkpoint"
            ) from exc
        self._torch = torch

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        model = self._model.model
        wav = torch.from_numpy(samples[None, :].astype(np.float32))
        with torch.no_grad():
            out = model(wav, None)
        # Frame-wise penultimate embeddings; the head's framewise_output
        # shares this stride (10 s -> ~31 frames).
        return out["framewise_embedding"].squeeze(0).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    if spec.clip_level:
        return PannsTaggingAdapter(spec)
    return PannsSedAdapter(spec)
