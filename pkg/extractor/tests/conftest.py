import numpy as np
import pytest
import scipy.io.wavfile


@pytest.fixture
def make_wav(tmp_path):
    """Write a deterministic test WAV; returns its path."""

    def _make(name="clip.wav", duration_s=30.0, rate=16000, freq=220.0, stereo=False):
        t = np.arange(int(duration_s * rate)) / rate
        x = 0.5 * np.sin(2 * np.pi * freq * t) + 0.1 * np.sin(2 * np.pi * 3.3 * t)
        data = (x * 32767).astype(np.int16)
        if stereo:
            data = np.stack([data, data // 2], axis=1)
        path = tmp_path / name
        scipy.io.wavfile.write(path, rate, data)
        return path

    return _make
