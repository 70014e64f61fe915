"""Turn per-frame probabilities into a labeled segmentation.

Boundaries come from mean-threshold peak picking on the section-onset
activation; each resulting segment takes the function class with the
highest average probability over its frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import round_half_up
from .annotations import FunctionClass, NUM_CLASSES, SegmentAnnotation
from .errors import ValidationError


@dataclass(frozen=True)
class PeakPickParams:
    """Peak-picking parameters (seconds).

    A frame is a peak when it is the local maximum over +-max_window_s/2
    and exceeds the running mean over +-mean_window_s/2 by delta; peaks
    closer than min_gap_s keep the higher activation.
    """

    max_window_s: float = 6.0
    mean_window_s: float = 12.0
    delta: float = 0.05
    min_gap_s: float = 1.0

    def __post_init__(self):
        for name in ("max_window_s", "mean_window_s", "delta", "min_gap_s"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")


@dataclass(frozen=True)
class LabeledSegmentation:
    """Contiguous non-overlapping labeled intervals covering [0, duration]."""

    intervals: tuple[tuple[float, float, FunctionClass], ...]

    def __post_init__(self):
        if not self.intervals:
            raise ValidationError("segmentation has no intervals")
        if self.intervals[0][0] != 0:
            raise ValidationError("segmentation must start at 0")
        for (s, e, _), nxt in zip(self.intervals, self.intervals[1:] + (None,)):
            if not e > s:
                raise ValidationError(f"empty or inverted interval [{s}, {e})")
            if nxt is not None and nxt[0] != e:
                raise ValidationError(f"gap or overlap at {e} vs {nxt[0]}")

    @property
    def duration_s(self) -> float:
        return self.intervals[-1][1]

    @property
    def starts(self) -> np.ndarray:
        return np.array([s for s, _, _ in self.intervals], dtype=np.float64)

    @property
    def classes(self) -> np.ndarray:
        return np.array([int(c) for _, _, c in self.intervals], dtype=np.int64)

    def boundaries(self) -> list[float]:
        """All boundary times including both endpoints."""
        return [float(s) for s, _, _ in self.intervals] + [float(self.duration_s)]

    def class_at(self, times_s: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.starts, np.asarray(times_s, dtype=np.float64), side="right") - 1
        return self.classes[np.clip(idx, 0, len(self.intervals) - 1)]

    def to_annotation(self) -> SegmentAnnotation:
        """Convert to the annotation type (round-trippable text export)."""
        return SegmentAnnotation(
            segments=tuple((s, c) for s, _, c in self.intervals),
            duration_s=self.duration_s,
        )


def segmentation_from_annotation(ann: SegmentAnnotation) -> LabeledSegmentation:
    starts = list(ann.starts) + [ann.duration_s]
    return LabeledSegmentation(
        intervals=tuple(
            (float(a), float(b), FunctionClass(int(c)))
            for a, b, c in zip(starts, starts[1:], ann.classes)
        )
    )


def peak_pick(
    activation: np.ndarray,
    frame_rate_hz: float,
    params: PeakPickParams = PeakPickParams(),
) -> np.ndarray:
    """Pick section-onset peaks; returns sorted frame indices including the
    segment delimiters 0 and T.

    A frame is a candidate when its activation strictly exceeds every frame
    in the preceding half-window and is >= every frame in the following
    half-window (so a plateau yields its first frame) and is at least delta
    above the running mean. Candidates closer than min_gap_s keep the
    higher activation, ties to the lower index.
    """
    a = np.asarray(activation, dtype=np.float64)
    if a.ndim != 1 or len(a) == 0:
        raise ValidationError("activation must be a non-empty 1-D vector")
    if a.min() < 0 or a.max() > 1:
        raise ValidationError("activation values must lie in [0, 1]")
    if params.min_gap_s < 1.0 / frame_rate_hz:
        raise ValidationError("min_gap_s must be at least one frame period")
    t = len(a)
    w = max(1, round_half_up(params.max_window_s * frame_rate_hz / 2))
    m = max(1, round_half_up(params.mean_window_s * frame_rate_hz / 2))

    neg = np.full(w, -np.inf)
    left = np.lib.stride_tricks.sliding_window_view(np.concatenate([neg, a]), w)[:t]
    right = np.lib.stride_tricks.sliding_window_view(np.concatenate([a, neg]), w)[1 : t + 1]
    is_max = (a > left.max(axis=1)) & (a >= right.max(axis=1))

    csum = np.concatenate([[0.0], np.cumsum(a)])
    lo = np.maximum(np.arange(t) - m, 0)
    hi = np.minimum(np.arange(t) + m + 1, t)
    running_mean = (csum[hi] - csum[lo]) / (hi - lo)
    candidates = np.flatnonzero(is_max & (a >= running_mean + params.delta))

    gap_frames = params.min_gap_s * frame_rate_hz
    kept: list[int] = []
    for k in sorted(candidates, key=lambda k: (-a[k], k)):
        if all(abs(k - j) >= gap_frames for j in kept):
            kept.append(int(k))
    return np.unique(np.concatenate([[0], kept, [t]]).astype(np.int64))


def assign_functions(
    function_prob: np.ndarray,
    boundaries: np.ndarray,
    frame_rate_hz: float,
    duration_s: float,
) -> LabeledSegmentation:
    """Label each [b_i, b_{i+1}) segment with the argmax of its average
    class probabilities (ties to the lowest class id); intervals are mapped
    to seconds with the final end clamped to duration_s.

    Rows are normalized to unit sum before averaging, so decisions depend
    only on each frame's class proportions. A no-op for softmax rows.
    """
    p = np.asarray(function_prob, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != NUM_CLASSES:
        raise ValidationError(f"function_prob must be T x {NUM_CLASSES}, got {p.shape}")
    sums = p.sum(axis=1, keepdims=True)
    p = np.divide(p, sums, out=np.zeros_like(p), where=sums > 0)
    b = np.asarray(boundaries, dtype=np.int64)
    if len(b) < 2 or b[0] != 0 or b[-1] != p.shape[0]:
        raise ValidationError("boundaries must be ascending and include 0 and T")
    if np.any(np.diff(b) <= 0):
        raise ValidationError("boundaries must be strictly ascending")
    if not duration_s > (b[-2]) / frame_rate_hz:
        raise ValidationError("duration_s must exceed the last interior boundary")
    intervals = []
    for i0, i1 in zip(b[:-1], b[1:]):
        cls = FunctionClass(int(np.argmax(p[i0:i1].mean(axis=0))))
        start = i0 / frame_rate_hz
        end = duration_s if i1 == b[-1] else i1 / frame_rate_hz
        intervals.append((float(start), float(end), cls))
    return LabeledSegmentation(intervals=tuple(intervals))
