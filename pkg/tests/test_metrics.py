import numpy as np
import pytest

from msa_probe.annotations import FunctionClass, SegmentAnnotation, boundaries_of
from msa_probe.errors import ValidationError
from msa_probe.metrics import (
    PAIRWISE_GRID_S,
    boundary_f,
    evaluate_track,
    f_measure,
    frame_accuracy,
    pairwise_f,
)
from msa_probe.postprocess import LabeledSegmentation, segmentation_from_annotation

from oracles import accuracy_bruteforce, max_matching_exhaustive, pairwise_prf_bruteforce


def seg(*intervals):
    return LabeledSegmentation(
        intervals=tuple((float(s), float(e), FunctionClass(c)) for s, e, c in intervals)
    )


def random_segmentation(rng, duration, max_segments=8):
    k = int(rng.integers(1, max_segments + 1))
    cuts = np.sort(rng.uniform(0.05, duration - 0.05, size=k - 1)) if k > 1 else np.array([])
    edges = np.concatenate([[0.0], cuts, [duration]])
    classes = rng.integers(0, 7, size=k)
    return seg(*[(a, b, c) for a, b, c in zip(edges, edges[1:], classes)])


class TestBoundaryF:
    def test_identity(self):
        prf = boundary_f([0, 10, 20], [0, 10, 20], 0.5)
        assert prf.precision == prf.recall == prf.f == 1.0

    def test_hand_example_half_second(self):
        prf = boundary_f([0, 10, 20, 30], [0, 10.4, 25, 30], 0.5)
        assert prf.precision == 0.75 and prf.recall == 0.75 and prf.f == 0.75

    def test_dense_estimate_three_seconds(self):
        prf = boundary_f([0, 30], list(range(31)), 3.0)
        assert prf.precision == pytest.approx(2 / 31, abs=1e-15)
        assert prf.recall == 1.0
        assert prf.f == pytest.approx(f_measure(2 / 31, 1.0), abs=1e-15)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            ref = np.sort(rng.uniform(0, 60, size=rng.integers(2, 10)))
            est = np.sort(rng.uniform(0, 60, size=rng.integers(2, 10)))
            a = boundary_f(ref, est, 1.5)
            b = boundary_f(est, ref, 1.5)
            assert a.precision == pytest.approx(b.recall, abs=1e-15)
            assert a.recall == pytest.approx(b.precision, abs=1e-15)

    def test_matching_is_maximum(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            ref = np.sort(rng.uniform(0, 30, size=rng.integers(2, 9)))
            est = np.sort(rng.uniform(0, 30, size=rng.integers(2, 9)))
            window = float(rng.choice([0.5, 3.0]))
            prf = boundary_f(ref, est, window)
            hits = round(prf.precision * len(est))
            assert hits == max_matching_exhaustive(ref, est, window)

    def test_unsorted_rejected(self):
        with pytest.raises(ValidationError):
            boundary_f([0, 5, 3], [0, 5], 0.5)

    def test_too_few_entries_rejected(self):
        with pytest.raises(ValidationError):
            boundary_f([0], [0, 5], 0.5)


class TestPairwiseF:
    def test_identity(self):
        s = seg((0, 10, 1), (10, 20, 2))
        prf = pairwise_f(s, s)
        assert prf.f == 1.0

    def test_hand_example(self):
        # 4 grid points: ref labels AABB, est labels AAAB.
        dur = 4 * PAIRWISE_GRID_S
        ref = seg((0, 0.2, 0), (0.2, dur, 1))
        est = seg((0, 0.3, 0), (0.3, dur, 1))
        prf = pairwise_f(ref, est)
        assert prf.precision == pytest.approx(1 / 3, abs=1e-15)
        assert prf.recall == pytest.approx(1 / 2, abs=1e-15)
        assert prf.f == pytest.approx(0.4, abs=1e-12)

    def test_single_label_estimate(self):
        # k equal classes vs one flat label: recall 1, precision -> 1/k.
        k, dur = 4, 40.0
        edges = np.linspace(0, dur, k + 1)
        ref = seg(*[(a, b, i) for i, (a, b) in enumerate(zip(edges, edges[1:]))])
        est = seg((0, dur, 0))
        prf = pairwise_f(ref, est)
        n = int(round(dur / PAIRWISE_GRID_S))
        per = n // k
        expected_p = (k * per * (per - 1) / 2) / (n * (n - 1) / 2)
        assert prf.recall == 1.0
        assert prf.precision == pytest.approx(expected_p, abs=1e-15)
        assert abs(prf.precision - 1 / k) < 0.01

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            dur = float(rng.uniform(1.0, 15.0))
            ref = random_segmentation(rng, dur)
            est = random_segmentation(rng, dur)
            prf = pairwise_f(ref, est)
            n = int(np.ceil(dur / PAIRWISE_GRID_S - 1e-9))
            times = np.arange(n) * PAIRWISE_GRID_S
            p, r, f = pairwise_prf_bruteforce(ref.class_at(times), est.class_at(times))
            assert prf.precision == pytest.approx(p, abs=1e-12)
            assert prf.recall == pytest.approx(r, abs=1e-12)
            assert prf.f == pytest.approx(f, abs=1e-12)

    def test_class_bijection_invariance(self):
        rng = np.random.default_rng(3)
        perm = rng.permutation(7)
        dur = 12.0
        ref = random_segmentation(rng, dur)
        est = random_segmentation(rng, dur)

        def relabel(s):
            return seg(*[(a, b, int(perm[int(c)])) for a, b, c in s.intervals])

        assert pairwise_f(ref, est) == pairwise_f(relabel(ref), relabel(est))

    def test_no_positive_pairs_convention(self):
        # Every estimated frame its own class: no same-label pairs -> P = 0.
        ref = seg((0, 0.7, 0))
        est = seg(*[(i * 0.1, (i + 1) * 0.1, i) for i in range(7)])
        prf = pairwise_f(ref, est)
        assert prf.precision == 0.0 and prf.f == 0.0


class TestFrameAccuracy:
    def test_identity(self):
        s = seg((0, 7, 3), (7, 20, 5))
        assert frame_accuracy(s, s) == 1.0

    def test_three_quarters(self):
        # 4 frames at 2 Hz: ref AABB vs est ABBB.
        ref = seg((0, 1.0, 0), (1.0, 2.0, 1))
        est = seg((0, 0.5, 0), (0.5, 2.0, 1))
        assert frame_accuracy(ref, est) == 0.75

    def test_disjoint_labels(self):
        ref = seg((0, 5, 0))
        est = seg((0, 5, 1))
        assert frame_accuracy(ref, est) == 0.0

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            dur = float(rng.uniform(1.0, 30.0))
            ref = random_segmentation(rng, dur)
            est = random_segmentation(rng, dur)
            expected = accuracy_bruteforce(ref.intervals, est.intervals, dur, 2.0)
            assert frame_accuracy(ref, est) == pytest.approx(expected, abs=1e-12)

    def test_bijection_invariance(self):
        rng = np.random.default_rng(5)
        perm = rng.permutation(7)
        ref = random_segmentation(rng, 20.0)
        est = random_segmentation(rng, 20.0)

        def relabel(s):
            return seg(*[(a, b, int(perm[int(c)])) for a, b, c in s.intervals])

        assert frame_accuracy(ref, est) == frame_accuracy(relabel(ref), relabel(est))

    def test_duration_mismatch_est_padded(self):
        ref = seg((0, 10, 0))
        est = seg((0, 6, 0))  # short estimate gets silence-padded over [6, 10]
        assert frame_accuracy(ref, est) == pytest.approx(0.6)


class TestEvaluateTrack:
    def ann(self, segments, duration):
        return SegmentAnnotation(
            segments=tuple((s, FunctionClass(c)) for s, c in segments), duration_s=duration
        )

    def test_identity_scores_one(self):
        ann = self.ann([(0, 0), (12.5, 2), (40.0, 1)], 90.0)
        scores = evaluate_track(ann, segmentation_from_annotation(ann))
        assert scores.hr05f.f == 1.0
        assert scores.hr3f.f == 1.0
        assert scores.pwf.f == 1.0
        assert scores.acc == 1.0

    def test_single_silence_estimate(self):
        ann = self.ann([(0, 0), (20, 1), (40, 2), (60, 6)], 80.0)
        est = seg((0, 80.0, 6))
        scores = evaluate_track(ann, est)
        ref_bounds = boundaries_of(ann)
        assert scores.hr05f.recall == pytest.approx(2 / len(ref_bounds))
        assert scores.hr05f.precision == 1.0
        assert scores.acc == pytest.approx(20 / 80 * 160 / 160)  # silence share of frames

    def test_outputs_in_unit_interval(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            dur = float(rng.uniform(5.0, 60.0))
            k = int(rng.integers(1, 6))
            cuts = np.sort(rng.uniform(0.5, dur - 0.5, size=k - 1)) if k > 1 else []
            starts = [0.0, *cuts]
            ann = self.ann([(s, int(rng.integers(0, 7))) for s in starts], dur)
            est = random_segmentation(rng, dur)
            scores = evaluate_track(ann, est)
            for value in (*scores.as_row().values(),):
                assert 0.0 <= value <= 1.0

    def test_matches_oracle_composition(self):
        # 50 random cases: each field equals the independently composed
        # brute-force value.
        rng = np.random.default_rng(7)
        for _ in range(50):
            dur = float(rng.uniform(2.0, 18.0))
            k = int(rng.integers(1, 6))
            cuts = np.sort(rng.uniform(0.2, dur - 0.2, size=k - 1)) if k > 1 else []
            starts = [0.0, *cuts]
            ann = self.ann([(s, int(rng.integers(0, 7))) for s in starts], dur)
            est = random_segmentation(rng, dur)
            scores = evaluate_track(ann, est)

            ref_b = np.asarray(boundaries_of(ann))
            est_b = np.asarray(est.boundaries())
            for window, prf in ((0.5, scores.hr05f), (3.0, scores.hr3f)):
                hits = max_matching_exhaustive(ref_b, est_b, window)
                assert prf.precision == pytest.approx(hits / len(est_b), abs=1e-12)
                assert prf.recall == pytest.approx(hits / len(ref_b), abs=1e-12)

            ref_seg = segmentation_from_annotation(ann)
            n = int(np.ceil(dur / PAIRWISE_GRID_S - 1e-9))
            times = np.arange(n) * PAIRWISE_GRID_S
            p, r, f = pairwise_prf_bruteforce(ref_seg.class_at(times), est.class_at(times))
            assert scores.pwf.f == pytest.approx(f, abs=1e-12)

            acc = accuracy_bruteforce(ref_seg.intervals, est.intervals, dur, 2.0)
            assert scores.acc == pytest.approx(acc, abs=1e-12)
