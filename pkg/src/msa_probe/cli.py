"""Command-line entry point: ``msa-probe synth|train|eval|cv|report``.

Exit codes: 0 on success, 2 on validation/usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .annotations import load_label_map, serialize_annotation
from .errors import ValidationError
from .evaluation import predict_segmentation
from .featurestore import SynthConfig, synth_track, write_features_file
from .harness import (
    ExperimentConfig,
    Manifest,
    TrackEntry,
    _load_track,
    fold_split,
    load_manifest,
    load_summary,
    make_folds,
    report,
    run_cv,
    save_manifest,
)
from .metrics import evaluate_track
from .postprocess import PeakPickParams
from .probe import TrainConfig, load_checkpoint, save_checkpoint, train


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", required=True, help="manifest JSON path")
    p.add_argument("--model", required=True, help="feature model id in the manifest")
    p.add_argument("--pooling", choices=("on", "off"), default="off")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="JSON file with 'train'/'peak' overrides")
    p.add_argument("--label-map", help="JSON label mapping table override")


def _experiment_config(args, folds: int | None = None) -> ExperimentConfig:
    train_cfg = TrainConfig(seed=args.seed)
    peak_cfg = PeakPickParams()
    if args.config:
        overrides = json.loads(Path(args.config).read_text(encoding="utf-8"))
        train_cfg = replace(train_cfg, **overrides.get("train", {}))
        peak_cfg = replace(peak_cfg, **overrides.get("peak", {}))
    label_map = load_label_map(args.label_map) if args.label_map else None
    return ExperimentConfig(
        model_id=args.model,
        output_dir=Path(args.out),
        pooling=args.pooling == "on",
        train=train_cfg,
        peak=peak_cfg,
        folds=folds if folds is not None else getattr(args, "folds", 8),
        seed=args.seed,
        label_map=label_map,
    )


def _cmd_synth(args) -> int:
    out = Path(args.out)
    (out / "features").mkdir(parents=True, exist_ok=True)
    (out / "annotations").mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(args.tracks):
        cfg = SynthConfig(
            dim=args.dim,
            frame_rate_hz=args.frame_rate,
            n_segments_range=(args.min_segments, args.max_segments),
            segment_len_range_s=(args.min_seg_len, args.max_seg_len),
            noise_std=args.noise_std,
            seed=args.seed + i,
            boundary_pulse=args.boundary_pulse,
        )
        feats, ann = synth_track(cfg)
        track_id = f"synth-{i:04d}"
        faef = out / "features" / f"{track_id}.faef"
        ann_path = out / "annotations" / f"{track_id}.txt"
        write_features_file(feats, faef)
        ann_path.write_text(serialize_annotation(ann), encoding="utf-8")
        entries.append(
            TrackEntry(
                track_id=track_id,
                annotation_path=ann_path,
                duration_s=ann.duration_s,
                features={args.model: faef},
            )
        )
    save_manifest(Manifest(tracks=tuple(entries)), out / "manifest.json")
    print(f"wrote {args.tracks} tracks under {out}")
    return 0


def _cmd_cv(args) -> int:
    cfg = _experiment_config(args)
    manifest = load_manifest(args.manifest)
    result = run_cv(cfg, manifest)
    line = ", ".join(f"{k}={v * 100:.1f}" for k, v in result.overall.items())
    print(f"{result.model_id} ({result.pooling_tag}): {line}")
    print(f"artifacts in {cfg.output_dir}")
    return 0


def _cmd_train(args) -> int:
    cfg = _experiment_config(args)
    manifest = load_manifest(args.manifest)
    folds = make_folds(manifest.ids(), cfg.folds, cfg.seed)
    # Single split: fold --val-fold is held out for validation, the rest trains.
    val_ids = folds[args.val_fold]
    train_ids = [t for i, f in enumerate(folds) if i != args.val_fold for t in f]
    data = {tid: _load_track(manifest.entry(tid), cfg) for tid in manifest.ids()}
    model, history = train(
        [data[t][:2] for t in train_ids],
        [data[t][:2] for t in val_ids],
        cfg.train,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_checkpoint(model, cfg.train, out / "checkpoint.bin")
    best = max(history, key=lambda h: h.val_score) if history else None
    if best:
        print(f"best val score {best.val_score:.4f} at epoch {best.epoch}")
    print(f"checkpoint written to {out / 'checkpoint.bin'}")
    return 0


def _cmd_eval(args) -> int:
    cfg = _experiment_config(args)
    manifest = load_manifest(args.manifest)
    model, _ = load_checkpoint(args.checkpoint)
    out = Path(args.out)
    (out / "predictions").mkdir(parents=True, exist_ok=True)
    rows = []
    for entry in manifest.tracks:
        feats, _, ann = _load_track(entry, cfg)
        est = predict_segmentation(model, feats, cfg.peak, duration_s=ann.duration_s)
        (out / "predictions" / f"{entry.track_id}.txt").write_text(
            serialize_annotation(est.to_annotation()), encoding="utf-8"
        )
        scores = evaluate_track(ann, est)
        rows.append((entry.track_id, scores))
    lines = ["track_id,hr05f,hr3f,pwf,acc"]
    for tid, s in rows:
        r = s.as_row()
        lines.append(f"{tid},{r['hr05f']!r},{r['hr3f']!r},{r['pwf']!r},{r['acc']!r}")
    (out / "track_metrics.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"evaluated {len(rows)} tracks; metrics in {out / 'track_metrics.csv'}")
    return 0


def _cmd_report(args) -> int:
    rows = [load_summary(p) for p in args.results]
    md, csv_text = report(rows)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.md").write_text(md, encoding="utf-8")
    (out / "report.csv").write_text(csv_text, encoding="utf-8")
    print(md, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="msa-probe",
        description="Linear-probing benchmark harness for music structure analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic benchmark corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--model", default="synth", help="model id recorded in the manifest")
    p.add_argument("--tracks", type=int, default=64)
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--frame-rate", type=float, default=2.0)
    p.add_argument("--noise-std", type=float, default=0.3)
    p.add_argument("--min-segments", type=int, default=4)
    p.add_argument("--max-segments", type=int, default=8)
    p.add_argument("--min-seg-len", type=float, default=10.0)
    p.add_argument("--max-seg-len", type=float, default=40.0)
    p.add_argument("--boundary-pulse", type=float, default=2.5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("cv", help="run k-fold cross-validation")
    _add_common(p)
    p.add_argument("--folds", type=int, default=8)
    p.set_defaults(func=_cmd_cv)

    p = sub.add_parser("train", help="train one probe on a single split")
    _add_common(p)
    p.add_argument("--folds", type=int, default=8)
    p.add_argument("--val-fold", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on manifest tracks")
    _add_common(p)
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("report", help="merge summaries into the benchmark grid")
    p.add_argument("--results", nargs="+", required=True, help="summary.csv paths")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
