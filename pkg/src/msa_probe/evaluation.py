"""Inference + post-processing + scoring glue shared by training-time
validation and the cross-validation harness."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._util import LABEL_RATE_HZ
from .annotations import FrameTargets, SegmentAnnotation
from .featurestore import FeatureMatrix
from .metrics import TrackScores, boundary_f, evaluate_track
from .postprocess import LabeledSegmentation, PeakPickParams, assign_functions, peak_pick
from .probe import ProbeModel, infer_track


def predict_segmentation(
    model: ProbeModel,
    features: FeatureMatrix,
    peak_params: PeakPickParams = PeakPickParams(),
    duration_s: float | None = None,
) -> LabeledSegmentation:
    """Run the full prediction path on one track: infer per-frame
    probabilities, peak-pick boundaries, label segments."""
    boundary_prob, function_prob = infer_track(model, features)
    bounds = peak_pick(boundary_prob, LABEL_RATE_HZ, peak_params)
    if duration_s is None:
        duration_s = len(boundary_prob) / LABEL_RATE_HZ
    return assign_functions(function_prob, bounds, LABEL_RATE_HZ, duration_s)


def score_track(
    model: ProbeModel,
    features: FeatureMatrix,
    ref: SegmentAnnotation,
    peak_params: PeakPickParams = PeakPickParams(),
) -> TrackScores:
    est = predict_segmentation(model, features, peak_params, duration_s=ref.duration_s)
    return evaluate_track(ref, est)


def validation_score(
    model: ProbeModel,
    val: Sequence[tuple[FeatureMatrix, FrameTargets]],
    peak_params: PeakPickParams = PeakPickParams(),
) -> float:
    """Model-selection score: mean of HR.5F and frame accuracy over a fold.

    References come from the rasterized 2 Hz targets, so the score is
    computable without the original annotations: reference boundaries are
    the marked frames (plus both endpoints) and reference classes are the
    per-frame targets.
    """
    hrs: list[float] = []
    accs: list[float] = []
    for features, targets in val:
        duration = len(targets) / LABEL_RATE_HZ
        est = predict_segmentation(model, features, peak_params, duration_s=duration)
        ref_bounds = sorted(
            {0.0, duration, *(float(k) / LABEL_RATE_HZ for k in np.flatnonzero(targets.boundary))}
        )
        hrs.append(boundary_f(ref_bounds, est.boundaries(), 0.5).f)
        n = len(targets)
        centers = (np.arange(n) + 0.5) / LABEL_RATE_HZ
        accs.append(float(np.mean(est.class_at(centers) == targets.function)))
    return (float(np.mean(hrs)) + float(np.mean(accs))) / 2.0
