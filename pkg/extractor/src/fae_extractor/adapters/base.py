"""Adapter interface every encoder wrapper implements."""

from __future__ import annotations

import numpy as np

from ..specs import EncoderSpec


class EncoderAdapter:
    """Wraps one loaded encoder.

    ``encode`` maps a mono chunk at the spec's input sample rate to a
    (frames, feature_dim) float array. Chunking, resampling, and layer
    bookkeeping live in the driver; adapters only run the model.
    """

    def __init__(self, spec: EncoderSpec):
        self.spec = spec

    def encode(self, samples: np.ndarray) -> np.ndarray:
        raise NotImplementedError
