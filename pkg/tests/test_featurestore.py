import io

import numpy as np
import pytest

from msa_probe.annotations import FunctionClass
from msa_probe.errors import FormatError, ValidationError
from msa_probe.featurestore import (
    HEADER_SIZE,
    FeatureMatrix,
    SynthConfig,
    class_means,
    read_features,
    synth_track,
    write_features,
)


def roundtrip(m):
    buf = io.BytesIO()
    write_features(m, buf)
    buf.seek(0)
    return read_features(buf)


class TestFormat:
    def test_header_plus_payload_size(self):
        m = FeatureMatrix(2.0, np.zeros((1, 1), dtype=np.float32))
        buf = io.BytesIO()
        assert write_features(m, buf) == HEADER_SIZE + 4
        assert len(buf.getvalue()) == 28 + 4

    def test_data_section_size(self):
        m = FeatureMatrix(25.0, np.ones((2, 3), dtype=np.float32))
        buf = io.BytesIO()
        assert write_features(m, buf) == HEADER_SIZE + 24

    def test_nan_rejected(self):
        with pytest.raises(ValidationError):
            FeatureMatrix(2.0, np.array([[np.nan]]))

    def test_roundtrip_bit_exact(self):
        rng = np.random.default_rng(0)
        m = FeatureMatrix(6.25, rng.standard_normal((17, 5)).astype(np.float32))
        back = roundtrip(m)
        assert back.frame_rate_hz == m.frame_rate_hz
        assert back.data.dtype == np.float32
        assert np.array_equal(back.data, m.data)

    def test_bad_magic(self):
        with pytest.raises(FormatError) as exc:
            read_features(io.BytesIO(b"XXXX" + b"\0" * 60))
        assert exc.value.offset == 0

    def test_bad_version(self):
        m = FeatureMatrix(2.0, np.zeros((1, 1), dtype=np.float32))
        buf = io.BytesIO()
        write_features(m, buf)
        raw = bytearray(buf.getvalue())
        raw[4] = 9
        with pytest.raises(FormatError) as exc:
            read_features(io.BytesIO(bytes(raw)))
        assert exc.value.offset == 4

    def test_truncated_payload_reports_offset(self):
        m = FeatureMatrix(2.0, np.zeros((10, 1), dtype=np.float32))
        buf = io.BytesIO()
        write_features(m, buf)
        raw = buf.getvalue()[: HEADER_SIZE + 9 * 4]  # drop the last row
        with pytest.raises(FormatError) as exc:
            read_features(io.BytesIO(raw))
        assert exc.value.offset == HEADER_SIZE + 9 * 4

    def test_truncated_header(self):
        with pytest.raises(FormatError):
            read_features(io.BytesIO(b"FAEF\x01"))


class TestSynth:
    def test_zero_noise_single_segment_equals_class_mean(self):
        cfg = SynthConfig(dim=12, n_segments_range=(1, 1), noise_std=0.0, seed=5)
        feats, ann = synth_track(cfg)
        cls = int(ann.segments[0][1])
        expected = class_means(12)[cls].astype(np.float32)
        assert np.array_equal(feats.data, np.tile(expected, (feats.frames, 1)))

    def test_deterministic(self):
        cfg = SynthConfig(seed=42)
        f1, a1 = synth_track(cfg)
        f2, a2 = synth_track(cfg)
        assert np.array_equal(f1.data, f2.data)
        assert a1 == a2

    def test_different_seeds_differ(self):
        f1, _ = synth_track(SynthConfig(seed=1))
        f2, _ = synth_track(SynthConfig(seed=2))
        assert f1.data.shape != f2.data.shape or not np.array_equal(f1.data, f2.data)

    def test_segment_means_recoverable(self):
        # Law-of-large-numbers check: per-segment feature averages sit close
        # to their class means (RMS over dims) for segments of >= 10 s.
        cfg = SynthConfig(dim=16, noise_std=0.1, seed=7)
        feats, ann = synth_track(cfg)
        means = class_means(16)
        starts = list(ann.starts) + [ann.duration_s]
        for (seg_start, cls), seg_end in zip(ann.segments, starts[1:]):
            if seg_end - seg_start < 10.0:
                continue
            i0 = int(np.ceil(seg_start * cfg.frame_rate_hz))
            i1 = int(np.floor(seg_end * cfg.frame_rate_hz))
            seg_mean = feats.data[i0:i1].mean(axis=0)
            rms = float(np.sqrt(np.mean((seg_mean - means[int(cls)]) ** 2)))
            assert rms < 0.05

    def test_output_passes_invariants(self):
        for seed in range(5):
            feats, ann = synth_track(SynthConfig(seed=seed))
            assert np.all(np.isfinite(feats.data))
            assert abs(feats.frames - ann.duration_s * feats.frame_rate_hz) <= 2
            assert isinstance(ann.segments[0][1], FunctionClass)

    def test_pulse_marks_interior_boundaries(self):
        cfg = SynthConfig(dim=16, noise_std=0.0, seed=3, boundary_pulse=1.0)
        feats, ann = synth_track(cfg)
        means = class_means(16)
        for start, _ in ann.segments[1:]:
            j = int(np.floor(start * cfg.frame_rate_hz + 0.5))
            cls = int(ann.class_at(np.array([(j + 0.5) / cfg.frame_rate_hz]))[0])
            residual = feats.data[j].astype(np.float64) - means[cls]
            assert np.linalg.norm(residual) == pytest.approx(1.0, abs=1e-5)

    def test_bad_config_rejected(self):
        with pytest.raises(ValidationError):
            SynthConfig(noise_std=-1.0)
        with pytest.raises(ValidationError):
            SynthConfig(n_segments_range=(3, 2))
        with pytest.raises(ValidationError):
            SynthConfig(class_count=5)
