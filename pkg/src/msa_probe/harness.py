"""Dataset manifests, deterministic k-fold cross-validation, and reporting.

A manifest is a JSON index of tracks (annotation path, duration, one
feature file per encoder). ``run_cv`` trains one probe per fold, writes
per-fold artifacts (checkpoint, history, predictions) plus CSV results,
and aggregates unweighted means per fold and across folds. ``report``
renders one or more summaries into the benchmark's 4-metrics x {np, p}
grid with one-decimal percentages.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .annotations import FrameTargets, SegmentAnnotation, parse_annotation, rasterize, serialize_annotation
from .encoders import is_clip_level
from .errors import ValidationError
from .evaluation import predict_segmentation, validation_score
from .featurestore import FeatureMatrix, read_features_file
from .metrics import TrackScores, evaluate_track
from .pooling import PoolingSpec, sliding_pool
from .postprocess import PeakPickParams
from .probe import EpochStats, TrainConfig, save_checkpoint, train

METRIC_KEYS = ("hr05f", "hr3f", "pwf", "acc")
WORKERS_ENV = "MSA_PROBE_THREADS"


@dataclass(frozen=True)
class TrackEntry:
    track_id: str
    annotation_path: Path
    duration_s: float
    features: Mapping[str, Path]


@dataclass(frozen=True)
class Manifest:
    tracks: tuple[TrackEntry, ...]

    def __post_init__(self):
        ids = [t.track_id for t in self.tracks]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate track ids in manifest: {dupes}")

    def ids(self) -> list[str]:
        return [t.track_id for t in self.tracks]

    def entry(self, track_id: str) -> TrackEntry:
        for t in self.tracks:
            if t.track_id == track_id:
                return t
        raise KeyError(track_id)


def load_manifest(path: str | Path) -> Manifest:
    """Load a manifest; relative paths resolve against the manifest's directory."""
    path = Path(path)
    base = path.parent
    raw = json.loads(path.read_text(encoding="utf-8"))
    entries = []
    for item in raw["tracks"]:
        ann = base / item["annotation_path"]
        feats = {mid: base / p for mid, p in item["features"].items()}
        for p in [ann, *feats.values()]:
            if not p.exists():
                raise ValidationError(f"manifest references missing file: {p}")
        entries.append(
            TrackEntry(
                track_id=item["track_id"],
                annotation_path=ann,
                duration_s=float(item["duration_s"]),
                features=feats,
            )
        )
    return Manifest(tracks=tuple(entries))


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    path = Path(path)
    base = path.parent

    def rel(p: Path) -> str:
        try:
            return os.path.relpath(p, base)
        except ValueError:
            return str(p)

    payload = {
        "tracks": [
            {
                "track_id": t.track_id,
                "annotation_path": rel(t.annotation_path),
                "duration_s": t.duration_s,
                "features": {mid: rel(p) for mid, p in sorted(t.features.items())},
            }
            for t in manifest.tracks
        ]
    }
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class ExperimentConfig:
    model_id: str
    output_dir: Path
    pooling: bool = False
    train: TrainConfig = field(default_factory=TrainConfig)
    peak: PeakPickParams = field(default_factory=PeakPickParams)
    folds: int = 8
    seed: int = 0
    label_map: Mapping[str, str] | None = None

    def __post_init__(self):
        if self.folds < 2:
            raise ValidationError("folds must be >= 2")
        if self.seed < 0:
            raise ValidationError("seed must be >= 0")
        if not self.pooling and is_clip_level(self.model_id):
            raise ValidationError(
                f"{self.model_id} emits clip-level features; frame-wise probing "
                "is undefined without pooling (run with pooling enabled)"
            )


def make_folds(track_ids: Sequence[str], k: int, seed: int) -> list[list[str]]:
    """Deterministic fold assignment: sort ids, shuffle with the seeded
    generator, deal round-robin."""
    ids = sorted(track_ids)
    if len(ids) < k:
        raise ValidationError(f"need at least {k} tracks for {k} folds, got {len(ids)}")
    if seed < 0:
        raise ValidationError("seed must be >= 0")
    rng = np.random.default_rng(seed)
    folds: list[list[str]] = [[] for _ in range(k)]
    for i, j in enumerate(rng.permutation(len(ids))):
        folds[i % k].append(ids[j])
    return folds


def fold_split(folds: Sequence[Sequence[str]], i: int) -> tuple[list[str], list[str], list[str]]:
    """(test, val, train) ids for fold i: test = fold i, val = fold i+1,
    train = the remaining folds."""
    k = len(folds)
    test = list(folds[i])
    val = list(folds[(i + 1) % k])
    train_ids = [t for j in range(k) if j not in (i, (i + 1) % k) for t in folds[j]]
    return test, val, train_ids


def derive_fold_seed(seed: int, fold: int) -> int:
    """Independent per-fold seed: truncated SHA-256 of (seed, fold)."""
    digest = hashlib.sha256(f"{seed}:{fold}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def _load_track(
    entry: TrackEntry, cfg: ExperimentConfig
) -> tuple[FeatureMatrix, FrameTargets, SegmentAnnotation]:
    if cfg.model_id not in entry.features:
        raise ValidationError(f"track {entry.track_id} has no features for {cfg.model_id}")
    feats = read_features_file(entry.features[cfg.model_id])
    expected = entry.duration_s * feats.frame_rate_hz
    if abs(feats.frames - expected) > 2:
        raise ValidationError(
            f"track {entry.track_id}: {feats.frames} frames but manifest duration "
            f"{entry.duration_s}s at {feats.frame_rate_hz} Hz expects ~{expected:.1f}"
        )
    if cfg.pooling:
        feats = sliding_pool(feats, PoolingSpec())
    ann = parse_annotation(
        entry.annotation_path.read_text(encoding="utf-8"), cfg.label_map
    )
    return feats, rasterize(ann), ann


@dataclass(frozen=True)
class TrackResult:
    fold: int
    track_id: str
    scores: TrackScores


@dataclass
class CvResult:
    model_id: str
    pooling: bool
    tracks: list[TrackResult]
    fold_means: list[dict[str, float]]
    overall: dict[str, float]

    @property
    def pooling_tag(self) -> str:
        return "p" if self.pooling else "np"


def _mean_scores(rows: Sequence[TrackScores]) -> dict[str, float]:
    return {
        key: float(np.mean([r.as_row()[key] for r in rows])) for key in METRIC_KEYS
    }


def _run_fold(
    cfg: ExperimentConfig, manifest: Manifest, folds: list[list[str]], i: int
) -> tuple[list[TrackResult], list[EpochStats]]:
    test_ids, val_ids, train_ids = fold_split(folds, i)
    data = {
        tid: _load_track(manifest.entry(tid), cfg)
        for tid in [*train_ids, *val_ids, *test_ids]
    }
    train_cfg = replace(cfg.train, seed=derive_fold_seed(cfg.seed, i))

    def val_fn(model, val_tracks):
        return validation_score(model, val_tracks, cfg.peak)

    model, history = train(
        [data[t][:2] for t in train_ids],
        [data[t][:2] for t in val_ids],
        train_cfg,
        val_score_fn=val_fn,
    )

    fold_dir = Path(cfg.output_dir) / f"fold_{i}"
    pred_dir = fold_dir / "predictions"
    pred_dir.mkdir(parents=True, exist_ok=True)
    save_checkpoint(model, train_cfg, fold_dir / "checkpoint.bin")
    _write_history(history, fold_dir / "history.csv")

    results = []
    for tid in test_ids:
        feats, _, ann = data[tid]
        est = predict_segmentation(model, feats, cfg.peak, duration_s=ann.duration_s)
        (pred_dir / f"{tid}.txt").write_text(
            serialize_annotation(est.to_annotation()), encoding="utf-8"
        )
        results.append(TrackResult(i, tid, evaluate_track(ann, est)))
    return results, history


def _worker(args: tuple) -> tuple[list[TrackResult], list[EpochStats]]:
    return _run_fold(*args)


def run_cv(cfg: ExperimentConfig, manifest: Manifest) -> CvResult:
    """Full cross-validation for one (model, pooling) configuration.

    Per-fold seeds derive from cfg.seed so folds are independent and the
    whole run is reproducible; reruns with the same config produce
    byte-identical CSV outputs. MSA_PROBE_THREADS > 1 runs folds in
    parallel worker processes (each fold is internally deterministic and
    results aggregate in fold order).
    """
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    folds = make_folds(manifest.ids(), cfg.folds, cfg.seed)
    (out / "folds.json").write_text(json.dumps(folds, indent=2) + "\n", encoding="utf-8")

    workers = int(os.environ.get(WORKERS_ENV, "1") or "1")
    jobs = [(cfg, manifest, folds, i) for i in range(cfg.folds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, cfg.folds)) as pool:
            fold_outputs = list(pool.map(_worker, jobs))
    else:
        fold_outputs = [_run_fold(*job) for job in jobs]

    tracks: list[TrackResult] = []
    fold_means: list[dict[str, float]] = []
    for results, _ in fold_outputs:
        tracks.extend(results)
        fold_means.append(_mean_scores([r.scores for r in results]))
    overall = {
        key: float(np.mean([fm[key] for fm in fold_means])) for key in METRIC_KEYS
    }
    result = CvResult(cfg.model_id, cfg.pooling, tracks, fold_means, overall)
    (out / "results.csv").write_text(results_csv(result), encoding="utf-8")
    (out / "summary.csv").write_text(summary_csv(result), encoding="utf-8")
    (out / "summary.md").write_text(summary_markdown(result), encoding="utf-8")
    return result


def _write_history(history: Sequence[EpochStats], path: Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["epoch", "loss", "lr", "val_score"])
    for h in history:
        writer.writerow([h.epoch, repr(h.loss), repr(h.lr), repr(h.val_score)])
    path.write_text(buf.getvalue(), encoding="utf-8")


def results_csv(result: CvResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["model_id", "pooling", "fold", "track_id"]
    for key in ("hr05f", "hr3f", "pwf"):
        header += [f"{key}_p", f"{key}_r", f"{key}_f"]
    header.append("acc")
    writer.writerow(header)
    for tr in result.tracks:
        row = [result.model_id, result.pooling_tag, tr.fold, tr.track_id]
        for prf in (tr.scores.hr05f, tr.scores.hr3f, tr.scores.pwf):
            row += [repr(prf.precision), repr(prf.recall), repr(prf.f)]
        row.append(repr(tr.scores.acc))
        writer.writerow(row)
    return buf.getvalue()


def summary_csv(result: CvResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model_id", "pooling", "scope", *METRIC_KEYS])
    for i, fm in enumerate(result.fold_means):
        writer.writerow(
            [result.model_id, result.pooling_tag, f"fold_{i}"]
            + [repr(fm[k]) for k in METRIC_KEYS]
        )
    writer.writerow(
        [result.model_id, result.pooling_tag, "mean"]
        + [repr(result.overall[k]) for k in METRIC_KEYS]
    )
    return buf.getvalue()


def summary_markdown(result: CvResult) -> str:
    lines = [
        f"# Cross-validation summary: {result.model_id} ({result.pooling_tag})",
        "",
        "| scope | HR.5F | HR3F | PWF | ACC |",
        "| --- | --- | --- | --- | --- |",
    ]
    for i, fm in enumerate(result.fold_means):
        lines.append(
            f"| fold {i} | " + " | ".join(_pct(fm[k]) for k in METRIC_KEYS) + " |"
        )
    lines.append(
        "| **mean** | " + " | ".join(_pct(result.overall[k]) for k in METRIC_KEYS) + " |"
    )
    return "\n".join(lines) + "\n"


def _pct(value: float) -> str:
    return f"{value * 100:.1f}"


@dataclass(frozen=True)
class SummaryRow:
    """One (model, pooling) result set, as read back from summary.csv."""

    model_id: str
    pooling_tag: str
    metrics: Mapping[str, float]


def load_summary(path: str | Path) -> SummaryRow:
    """Read the 'mean' row of a summary.csv produced by run_cv."""
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["scope"] == "mean":
                return SummaryRow(
                    model_id=row["model_id"],
                    pooling_tag=row["pooling"],
                    metrics={k: float(row[k]) for k in METRIC_KEYS},
                )
    raise ValidationError(f"{path}: no 'mean' row found")


def report(rows: Sequence[SummaryRow]) -> tuple[str, str]:
    """Render summaries as the benchmark grid; returns (markdown, csv).

    One table row per model; columns are each metric split into np (no
    pooling) and p (pooling); values are percentages with one decimal and
    missing combinations render as ``n/a``.
    """
    if not rows:
        raise ValidationError("no results to report")
    order: list[str] = []
    cells: dict[tuple[str, str], Mapping[str, float]] = {}
    for row in rows:
        if row.model_id not in order:
            order.append(row.model_id)
        cells[(row.model_id, row.pooling_tag)] = row.metrics

    def cell(model: str, key: str, tag: str) -> str:
        metrics = cells.get((model, tag))
        return _pct(metrics[key]) if metrics is not None else "n/a"

    header = ["model_id"]
    for key in METRIC_KEYS:
        header += [f"{key}_np", f"{key}_p"]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    md = [
        "| FAE | HR.5F np | HR.5F p | HR3F np | HR3F p | PWF np | PWF p | ACC np | ACC p |",
        "| --- | --- | --- | --- | --- | --- | --- | --- | --- |",
    ]
    for model in order:
        values = [cell(model, key, tag) for key in METRIC_KEYS for tag in ("np", "p")]
        writer.writerow([model, *values])
        md.append("| " + " | ".join([model, *values]) + " |")
    return "\n".join(md) + "\n", buf.getvalue()
