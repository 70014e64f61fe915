"""CLAP wrappers (https://github.com/LAION-AI/CLAP) via laion-clap; one
512-d audio embedding per 10 s clip. The two supported checkpoints are the
released music_audioset and music_speech_audioset HTSAT-base models, found
through the CLAP_CKPT_DIR environment variable."""

from __future__ import annotations

import os

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter

_CHECKPOINTS = {
    "clap-music-audioset": "music_audioset_epoch_15_esc_90.14.pt",
    "clap-music-speech-audioset": "music_speech_audioset_epoch_15_esc_89.98.pt",
}


class ClapAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import laion_clap
        except ImportError as exc:
            raise MissingDependencyError(
                "CLAP needs laion-clap: pip install 'fae-extractor[clap]'"
            ) from exc
        ckpt = os.path.join(os.environ.get("CLAP_CKPT_DIR", "."), _CHECKPOINTS[spec.model_id])
        try:
            self._model = laion_clap.CLAP_Module(enable_fusion=False, amodel="HTSAT-base")
            self._model.load_ckpt(ckpt)
        except Exception as exc:
            raise MissingDependencyError(
                f"cannot load CLAP checkpoint {ckpt}; download it from the LAION release"
            ) from exc

    def encode(self, samples: np.ndarray) -> np.ndarray:
        emb = self._model.get_audio_embedding_from_data(
            x=samples[None, :].astype(np.float32), use_tensor=False
        )
        return np.asarray(emb)


def load(spec: EncoderSpec) -> EncoderAdapter:
    return ClapAdapter(spec)
