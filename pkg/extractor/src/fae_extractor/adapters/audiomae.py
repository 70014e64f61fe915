"""AudioMAE wrappers. The two released lines (the AudioSet-trained model
from github.com/facebookresearch/AudioMAE and the music-trained variant)
ship as research repositories with per-repo checkpoints rather than pip
packages; clone the repo, put it on PYTHONPATH as ``audiomae``, and point
AUDIOMAE_CKPT at the checkpoint (the fine-tuned ``-ft`` model ids expect
the audio-tagging fine-tuned weights)."""

from __future__ import annotations

import os

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter


class AudioMaeAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import audiomae  # noqa: F401  (repository checkout, not on PyPI)
            import torch
        except ImportError as exc:
            raise MissingDependencyError(
                "AudioMAE needs the model repository on PYTHONPATH as 'audiomae' plus "
                "torch, with AUDIOMAE_CKPT pointing at the matching checkpoint"
            ) from exc
        ckpt = os.environ.get("AUDIOMAE_CKPT")
        if not ckpt or not os.path.exists(ckpt):
            raise MissingDependencyError("AUDIOMAE_CKPT does not point at a checkpoint file")
        self._torch = torch
        self._model = audiomae.load_encoder(ckpt).eval()

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        wav = torch.from_numpy(samples[None, :].astype(np.float32))
        with torch.no_grad():
            hidden = self._model.forward_features(wav, output_hidden_states=True)
        # Patch tokens pooled per time step by the repo helper; the layer
        # index follows the published numbering.
        return np.asarray(hidden[self.spec.layer].squeeze(0).cpu().numpy())


def load(spec: EncoderSpec) -> EncoderAdapter:
    return AudioMaeAdapter(spec)
