"""MusicFM wrapper (https://github.com/minzwon/musicfm).

The repository is not packaged on PyPI; clone it, put it on PYTHONPATH,
and download the released checkpoint + stat files for the FMA or MSD
variant.
"""

from __future__ import annotations

import os

import numpy as np

from ..errors import MissingDependencyError
from ..specs import EncoderSpec
from .base import EncoderAdapter

_FILES = {
    "musicfm-fma": ("musicfm_fma_stats.json", "musicfm_fma.pt"),
    "musicfm-msd": ("msd_stats.json", "pretrained_msd.pt"),
}


class MusicFmAdapter(EncoderAdapter):
    def __init__(self, spec: EncoderSpec):
        super().__init__(spec)
        try:
            import torch
            from musicfm.model.musicfm_25hz import MusicFM25Hz
        except ImportError as exc:
            raise MissingDependencyError(
                "MusicFM needs torch plus the github.com/minzwon/musicfm repository "
                "on PYTHONPATH, with its released checkpoint files (set MUSICFM_HOME "
                "to the directory holding them)"
            ) from exc
        home = os.environ.get("MUSICFM_HOME", ".")
        stat_file, model_file = _FILES[spec.model_id]
        try:
            self._model = MusicFM25Hz(
                is_flash=False,
                stat_path=os.path.join(home, stat_file),
                model_path=os.path.join(home, model_file),
            ).eval()
        except Exception as exc:
            raise MissingDependencyError(
                f"cannot load MusicFM files {stat_file}/{model_file} under {home}"
            ) from exc
        self._torch = torch

    def encode(self, samples: np.ndarray) -> np.ndarray:
        torch = self._torch
        wav = torch.from_numpy(np.ascontiguousarray(samples, dtype=np.float32))[None, :]
        with torch.no_grad():
            _, hidden_states = self._model.get_predictions(wav)
        hidden = hidden_states[self.spec.layer]
        return hidden.squeeze(0).cpu().numpy()


def load(spec: EncoderSpec) -> EncoderAdapter:
    return MusicFmAdapter(spec)
