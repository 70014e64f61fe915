"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

Thresholds and tolerances are frozen here; the end-to-end synthetic
benchmark numbers were fixed after an initial oracle run and must not be
loosened.
"""

import math
import time

import numpy as np
import pytest

from msa_probe.annotations import parse_annotation, serialize_annotation
from msa_probe.cli import main
from msa_probe.featurestore import FeatureMatrix, read_features, write_features
from msa_probe.harness import ExperimentConfig, load_manifest, run_cv
from msa_probe.metrics import PAIRWISE_GRID_S, boundary_f, f_measure, frame_accuracy, pairwise_f
from msa_probe.pooling import PoolingSpec, adaptive_avg_pool, sliding_pool
from msa_probe.postprocess import LabeledSegmentation
from msa_probe.probe import ProbeModel, TrainConfig, forward, loss_and_grad, lr_at
from msa_probe.annotations import FrameTargets, FunctionClass

import io

from oracles import (
    adaptive_pool_naive,
    max_matching_exhaustive,
    pairwise_prf_bruteforce,
    accuracy_bruteforce,
    sliding_pool_naive,
    finite_diff_grads,
)


def check(name: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def random_segmentation(rng, duration, max_segments=8):
    k = int(rng.integers(1, max_segments + 1))
    cuts = np.sort(rng.uniform(0.05, duration - 0.05, size=k - 1)) if k > 1 else np.array([])
    edges = np.concatenate([[0.0], cuts, [duration]])
    classes = rng.integers(0, 7, size=k)
    return LabeledSegmentation(
        intervals=tuple(
            (float(a), float(b), FunctionClass(int(c)))
            for a, b, c in zip(edges, edges[1:], classes)
        )
    )


def test_metric_oracle_equivalence():
    """500 seeded random instances: matching cardinality equals exhaustive
    search; pairwise/accuracy equal brute force within 1e-12; < 30 s."""
    rng = np.random.default_rng(2024)
    t0 = time.time()
    worst = 0.0
    for _ in range(500):
        dur = float(rng.uniform(2.0, 20.0))  # <= 200 pairwise grid frames
        ref_b = np.sort(
            np.concatenate([[0.0, dur], rng.uniform(0, dur, size=rng.integers(0, 11))])
        )[:12]
        est_b = np.sort(
            np.concatenate([[0.0, dur], rng.uniform(0, dur, size=rng.integers(0, 11))])
        )[:12]
        window = float(rng.choice([0.5, 3.0]))
        prf = boundary_f(ref_b, est_b, window)
        hits = round(prf.precision * len(est_b))
        assert hits == max_matching_exhaustive(ref_b, est_b, window)

        ref_s = random_segmentation(rng, dur)
        est_s = random_segmentation(rng, dur)
        n = int(np.ceil(dur / PAIRWISE_GRID_S - 1e-9))
        times = np.arange(n) * PAIRWISE_GRID_S
        p, r, f = pairwise_prf_bruteforce(ref_s.class_at(times), est_s.class_at(times))
        got = pairwise_f(ref_s, est_s)
        worst = max(worst, abs(got.precision - p), abs(got.recall - r), abs(got.f - f))

        acc = frame_accuracy(ref_s, est_s)
        acc_ref = accuracy_bruteforce(ref_s.intervals, est_s.intervals, dur, 2.0)
        worst = max(worst, abs(acc - acc_ref))
    elapsed = time.time() - t0
    check(
        "metric oracle equivalence (500 instances)",
        worst < 1e-12 and elapsed < 30,
        f"max abs dev {worst:.2e}, {elapsed:.1f}s",
    )


def test_known_value_metric_checks():
    prf = boundary_f([0, 10, 20, 30], [0, 10.4, 25, 30], 0.5)
    ok1 = prf.precision == 0.75 and prf.recall == 0.75 and prf.f == 0.75

    prf2 = boundary_f([0, 30], list(range(31)), 3.0)
    ok2 = (
        abs(prf2.precision - 2 / 31) < 1e-15
        and prf2.recall == 1.0
        and abs(prf2.f - f_measure(2 / 31, 1.0)) < 1e-15
    )

    dur = 4 * PAIRWISE_GRID_S  # grid labels: ref AABB vs est AAAB
    ref = LabeledSegmentation(((0.0, 0.2, FunctionClass.intro), (0.2, dur, FunctionClass.verse)))
    est = LabeledSegmentation(((0.0, 0.3, FunctionClass.intro), (0.3, dur, FunctionClass.verse)))
    prf3 = pairwise_f(ref, est)
    ok3 = (
        abs(prf3.precision - 1 / 3) < 1e-15
        and abs(prf3.recall - 1 / 2) < 1e-15
        and abs(prf3.f - 0.4) < 1e-12
    )
    check(
        "known-value metric checks",
        ok1 and ok2 and ok3,
        f"F075={prf.f} F(2/31)={prf2.f:.6f} PWF={prf3.f:.6f}",
    )


def test_gradient_check():
    """100 random (model, window) cases at 64-bit: analytic vs central
    finite differences, max relative error < 1e-5; < 10 s."""
    rng = np.random.default_rng(7)
    t0 = time.time()
    worst = 0.0
    for _ in range(100):
        z = int(rng.integers(2, 7))
        t = int(rng.integers(4, 24))
        model = ProbeModel(rng.standard_normal((z, 8)), rng.standard_normal(8))
        x = rng.standard_normal((t, z))
        targets = FrameTargets(rng.integers(0, 2, t), rng.integers(0, 7, t))
        valid = rng.random(t) > 0.15
        if not valid.any():
            valid[0] = True

        def loss_fn(w, b):
            return loss_and_grad(forward(ProbeModel(w, b), x), targets, valid)[0]

        _, dlogits = loss_and_grad(forward(model, x), targets, valid)
        analytic_w = x.T @ dlogits
        analytic_b = dlogits.sum(axis=0)
        fd_w, fd_b = finite_diff_grads(loss_fn, model.weight, model.bias, h=1e-5)
        for a, f in ((analytic_w, fd_w), (analytic_b, fd_b)):
            rel = np.abs(a - f) / np.maximum(np.maximum(np.abs(a), np.abs(f)), 1e-8)
            worst = max(worst, float(rel.max()))
    elapsed = time.time() - t0
    check(
        "gradient check (100 cases)",
        worst < 1e-5 and elapsed < 10,
        f"max rel err {worst:.2e}, {elapsed:.1f}s",
    )


def test_analytic_loss_values():
    t = 5
    targets = FrameTargets(np.ones(t, dtype=int), np.zeros(t, dtype=int))
    loss, _ = loss_and_grad(np.zeros((t, 8)), targets)
    expected = math.log(2) + math.log(7)
    check(
        "analytic loss values (ln 2 + ln 7)",
        abs(loss - expected) < 1e-9,
        f"loss={loss!r} expected={expected!r}",
    )


def test_schedule_check():
    cfg = TrainConfig()
    v4 = lr_at(4, cfg)
    v99 = lr_at(99, cfg)
    expected99 = 1e-4 * 0.5 * (1 + math.cos(math.pi * 94 / 95))
    ok = (
        abs(v4 - 1e-4) <= 1e-12 * 1e-4
        and abs(v99 - expected99) <= 1e-12 * expected99
        and abs(v99 - 2.73e-8) / 2.73e-8 < 5e-3
    )
    check("learning-rate schedule", ok, f"lr(4)={v4!r} lr(99)={v99!r}")


def _synth_corpus(tmp_path, name, tracks, noise, seed=0):
    out = tmp_path / name
    rc = main(
        ["synth", "--out", str(out), "--tracks", str(tracks), "--dim", "16",
         "--frame-rate", "2", "--noise-std", str(noise),
         "--min-seg-len", "10", "--max-seg-len", "40", "--seed", str(seed)]
    )
    assert rc == 0
    return load_manifest(out / "manifest.json")


BENCH_TRAIN = TrainConfig(epochs=50, lr=1.5)


def test_end_to_end_synthetic_benchmark(tmp_path):
    """64 noisy tracks, 8-fold CV, 50 epochs: HR3F >= 0.85, ACC >= 0.90;
    the zero-noise variant reaches ACC = 1.0; total < 5 minutes."""
    t0 = time.time()
    manifest = _synth_corpus(tmp_path, "noisy", 64, 0.3)
    cfg = ExperimentConfig(
        model_id="synth", output_dir=tmp_path / "cv", train=BENCH_TRAIN, seed=0
    )
    noisy = run_cv(cfg, manifest).overall

    manifest0 = _synth_corpus(tmp_path, "clean", 16, 0.0)
    cfg0 = ExperimentConfig(
        model_id="synth", output_dir=tmp_path / "cv0", train=BENCH_TRAIN, seed=0
    )
    clean = run_cv(cfg0, manifest0).overall
    elapsed = time.time() - t0

    check(
        "end-to-end synthetic benchmark",
        noisy["hr3f"] >= 0.85 and noisy["acc"] >= 0.90 and clean["acc"] == 1.0
        and clean["hr3f"] >= 0.95 and elapsed < 300,
        f"noisy hr3f={noisy['hr3f']:.3f} acc={noisy['acc']:.3f}; "
        f"clean acc={clean['acc']:.6f} hr3f={clean['hr3f']:.3f}; {elapsed:.0f}s",
    )


def test_determinism_byte_identical_reports(tmp_path):
    manifest = _synth_corpus(tmp_path, "det", 16, 0.2, seed=3)
    blobs = []
    for name in ("a", "b"):
        cfg = ExperimentConfig(
            model_id="synth",
            output_dir=tmp_path / name,
            train=TrainConfig(epochs=10, lr=0.5),
            seed=11,
        )
        run_cv(cfg, manifest)
        blobs.append(
            (tmp_path / name / "results.csv").read_bytes()
            + (tmp_path / name / "summary.csv").read_bytes()
        )
    check("determinism: byte-identical CSV reports", blobs[0] == blobs[1])


def test_round_trips():
    rng = np.random.default_rng(99)
    ok = True
    for _ in range(100):
        n = int(rng.integers(1, 80))
        z = int(rng.integers(1, 24))
        fr = float(rng.choice([2.0, 6.25, 25.0, 75.0]))
        m = FeatureMatrix(fr, (rng.standard_normal((n, z)) * 10).astype(np.float32))
        buf = io.BytesIO()
        write_features(m, buf)
        buf.seek(0)
        back = read_features(buf)
        ok &= back.frame_rate_hz == m.frame_rate_hz and np.array_equal(back.data, m.data)

    for _ in range(100):
        k = int(rng.integers(1, 10))
        durs = rng.uniform(1.0, 40.0, size=k)
        starts = np.concatenate([[0.0], np.cumsum(durs)[:-1]])
        classes = rng.integers(0, 7, size=k)
        from msa_probe.annotations import SegmentAnnotation

        ann = SegmentAnnotation(
            segments=tuple((float(s), FunctionClass(int(c))) for s, c in zip(starts, classes)),
            duration_s=float(durs.sum()),
        )
        ok &= parse_annotation(serialize_annotation(ann)) == ann
    check("round-trips: FAEF and annotation text (100 each)", ok)


def test_pooling_equivalence():
    rng = np.random.default_rng(5)
    worst = 0.0
    for i in range(100):
        fr = float((2.0, 25.0, 75.0, 6.25)[i % 4])
        n = int(rng.integers(1, 260))
        z = int(rng.integers(1, 9))
        data = rng.standard_normal((n, z))
        got = sliding_pool(FeatureMatrix(fr, data), PoolingSpec()).data
        ref = sliding_pool_naive(data, fr, 5.0, 0.5)
        worst = max(worst, float(np.max(np.abs(got - ref))))
        t = int(rng.integers(1, 80))
        worst = max(
            worst, float(np.max(np.abs(adaptive_avg_pool(data, t) - adaptive_pool_naive(data, t))))
        )
    check("pooling equivalence vs naive references", worst < 1e-10, f"max abs dev {worst:.2e}")
