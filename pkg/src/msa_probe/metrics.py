"""Segmentation evaluation: boundary hit-rate F-scores, pairwise frame
clustering F, and per-frame label accuracy.

Semantics follow the common evaluation-library defaults: boundary lists
keep both endpoints (no trimming), hits are a one-to-one maximum matching
within the tolerance window, pairwise clustering samples labels on a 0.1 s
grid, and accuracy samples 2 Hz frame centers. Empty-positive conventions
return 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._util import LABEL_RATE_HZ, frame_count
from .annotations import NUM_CLASSES, FunctionClass, SegmentAnnotation, boundaries_of
from .errors import ValidationError
from .postprocess import LabeledSegmentation, segmentation_from_annotation

PAIRWISE_GRID_S = 0.1


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f: float


def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _check_boundaries(name: str, times: Sequence[float]) -> np.ndarray:
    arr = np.asarray(times, dtype=np.float64)
    if arr.ndim != 1 or len(arr) < 2:
        raise ValidationError(f"{name} boundaries need >= 2 entries (start and end)")
    if np.any(np.diff(arr) < 0):
        raise ValidationError(f"{name} boundaries must be sorted ascending")
    return arr


def _greedy_matches(ref: np.ndarray, est: np.ndarray, window: float) -> int:
    # Two-pointer greedy over sorted event lists: optimal one-to-one
    # matching cardinality for a symmetric tolerance window on a line.
    i = j = hits = 0
    while i < len(ref) and j < len(est):
        if abs(ref[i] - est[j]) <= window:
            hits += 1
            i += 1
            j += 1
        elif est[j] < ref[i] - window:
            j += 1
        else:
            i += 1
    return hits


def boundary_f(ref: Sequence[float], est: Sequence[float], window: float) -> PRF:
    """Boundary-detection PRF at a tolerance window (seconds).

    Hits are a maximum-cardinality one-to-one matching of reference and
    estimated boundaries with |r - e| <= window; precision = hits/|est|,
    recall = hits/|ref|. Endpoint boundaries participate like any other.
    """
    r = _check_boundaries("reference", ref)
    e = _check_boundaries("estimated", est)
    hits = _greedy_matches(r, e, window)
    precision = hits / len(e)
    recall = hits / len(r)
    return PRF(precision, recall, f_measure(precision, recall))


def _match_duration(est: LabeledSegmentation, duration_s: float) -> LabeledSegmentation:
    """Clamp or silence-pad an estimate to cover exactly [0, duration_s]."""
    if abs(est.duration_s - duration_s) < 1e-9:
        return est
    intervals: list[tuple[float, float, FunctionClass]] = []
    for s, e, c in est.intervals:
        if s >= duration_s:
            break
        intervals.append((s, min(e, duration_s), c))
    if not intervals:
        return LabeledSegmentation(((0.0, duration_s, FunctionClass.silence),))
    last_end = intervals[-1][1]
    if last_end < duration_s:
        intervals.append((last_end, duration_s, FunctionClass.silence))
    return LabeledSegmentation(tuple(intervals))


def _pairs(counts: np.ndarray) -> int:
    return int((counts * (counts - 1) // 2).sum())


def pairwise_f(ref: LabeledSegmentation, est: LabeledSegmentation) -> PRF:
    """Pairwise frame-clustering PRF on a 0.1 s sampling grid.

    Counts unordered same-label frame pairs (i < j) in each segmentation;
    precision = |ref_pairs & est_pairs| / |est_pairs|, recall likewise over
    |ref_pairs|. The estimate is clamped/padded to the reference duration.
    """
    duration = ref.duration_s
    if not duration > 0:
        raise ValidationError("zero-duration segmentation")
    est = _match_duration(est, duration)
    n = frame_count(duration, 1.0 / PAIRWISE_GRID_S)
    times = np.arange(n, dtype=np.float64) * PAIRWISE_GRID_S
    y_ref = ref.class_at(times)
    y_est = est.class_at(times)
    contingency = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    np.add.at(contingency, (y_ref, y_est), 1)
    both = _pairs(contingency)
    ref_pairs = _pairs(contingency.sum(axis=1))
    est_pairs = _pairs(contingency.sum(axis=0))
    precision = both / est_pairs if est_pairs else 0.0
    recall = both / ref_pairs if ref_pairs else 0.0
    return PRF(precision, recall, f_measure(precision, recall))


def frame_accuracy(
    ref: LabeledSegmentation,
    est: LabeledSegmentation,
    frame_rate_hz: float = LABEL_RATE_HZ,
) -> float:
    """Fraction of label-frame centers where the class ids agree."""
    duration = ref.duration_s
    if not duration > 0:
        raise ValidationError("zero-duration segmentation")
    est = _match_duration(est, duration)
    n = frame_count(duration, frame_rate_hz)
    centers = (np.arange(n, dtype=np.float64) + 0.5) / frame_rate_hz
    return float(np.mean(ref.class_at(centers) == est.class_at(centers)))


@dataclass(frozen=True)
class TrackScores:
    """All four metrics for one track."""

    hr05f: PRF
    hr3f: PRF
    pwf: PRF
    acc: float

    def as_row(self) -> dict[str, float]:
        return {
            "hr05f": self.hr05f.f,
            "hr3f": self.hr3f.f,
            "pwf": self.pwf.f,
            "acc": self.acc,
        }


def evaluate_track(ref_ann: SegmentAnnotation, est: LabeledSegmentation) -> TrackScores:
    """Score one estimated segmentation against its reference annotation."""
    ref_seg = segmentation_from_annotation(ref_ann)
    ref_bounds = boundaries_of(ref_ann)
    est_bounds = est.boundaries()
    return TrackScores(
        hr05f=boundary_f(ref_bounds, est_bounds, 0.5),
        hr3f=boundary_f(ref_bounds, est_bounds, 3.0),
        pwf=pairwise_f(ref_seg, est),
        acc=frame_accuracy(ref_seg, est),
    )
