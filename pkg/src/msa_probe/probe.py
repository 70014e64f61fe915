"""Single-layer linear probe over frozen features, with its training loop.

The model maps a window of features (adaptively pooled to the 2 Hz label
grid) through one Z x 8 linear layer: output channel 0 is the section-onset
logit, channels 1..7 are the seven function-class logits. Training sums a
per-frame binary cross-entropy on channel 0 and a 7-class cross-entropy on
the rest, optimized with decoupled-weight-decay Adam under a linear-warmup
plus cosine-annealing schedule. All arithmetic is float64 so gradient tests
can use tight tolerances.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._util import LABEL_RATE_HZ, label_frame_count, round_half_up
from .annotations import CLASS_NAMES, NUM_CLASSES, FrameTargets
from .errors import FormatError, ValidationError
from .featurestore import FeatureMatrix
from .pooling import adaptive_avg_pool

N_OUTPUTS = 1 + NUM_CLASSES  # boundary logit + one logit per function class


@dataclass
class ProbeModel:
    """Linear probe parameters: weight (Z x 8) and bias (8,)."""

    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weight.ndim != 2 or self.weight.shape[1] != N_OUTPUTS:
            raise ValidationError(f"weight must be Z x {N_OUTPUTS}, got {self.weight.shape}")
        if self.bias.shape != (N_OUTPUTS,):
            raise ValidationError(f"bias must have shape ({N_OUTPUTS},), got {self.bias.shape}")
        if not (np.all(np.isfinite(self.weight)) and np.all(np.isfinite(self.bias))):
            raise ValidationError("model parameters must be finite")

    @property
    def feature_dim(self) -> int:
        return self.weight.shape[0]

    def copy(self) -> "ProbeModel":
        return ProbeModel(self.weight.copy(), self.bias.copy())


@dataclass(frozen=True)
class TrainConfig:
    window_s: float = 30.0
    label_frames: int = 60
    batch_size: int = 8
    epochs: int = 100
    lr: float = 1e-4
    weight_decay: float = 0.01
    warmup_epochs: int = 5
    betas: tuple[float, float] = (0.9, 0.999)
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")
        if self.epochs > 0 and not (0 <= self.warmup_epochs < self.epochs):
            raise ValidationError("need 0 <= warmup_epochs < epochs")
        for name in ("window_s", "label_frames", "batch_size", "lr", "eps"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.weight_decay < 0:
            raise ValidationError("weight_decay must be >= 0")
        if self.seed < 0:
            raise ValidationError("seed must be >= 0")


@dataclass
class OptState:
    """Adam moment estimates, one pair of tensors per parameter."""

    step: int = 0
    m_weight: np.ndarray | None = None
    v_weight: np.ndarray | None = None
    m_bias: np.ndarray | None = None
    v_bias: np.ndarray | None = None

    @classmethod
    def zeros_like(cls, model: ProbeModel) -> "OptState":
        return cls(
            step=0,
            m_weight=np.zeros_like(model.weight),
            v_weight=np.zeros_like(model.weight),
            m_bias=np.zeros_like(model.bias),
            v_bias=np.zeros_like(model.bias),
        )


@dataclass
class Gradients:
    weight: np.ndarray
    bias: np.ndarray


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    loss: float
    lr: float
    val_score: float


def init_model(feature_dim: int, rng: np.random.Generator) -> ProbeModel:
    """Fan-in uniform weight init, zero bias."""
    bound = 1.0 / math.sqrt(feature_dim)
    weight = rng.uniform(-bound, bound, size=(feature_dim, N_OUTPUTS))
    return ProbeModel(weight=weight, bias=np.zeros(N_OUTPUTS))


def forward(model: ProbeModel, x: np.ndarray) -> np.ndarray:
    """Per-frame logits: x[t] . weight + bias, for a T x Z input."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.feature_dim:
        raise ValidationError(
            f"input must be T x {model.feature_dim}, got shape {x.shape}"
        )
    return x @ model.weight + model.bias


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    return -np.logaddexp(0.0, -x)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def loss_and_grad(
    logits: np.ndarray,
    targets: FrameTargets,
    valid: np.ndarray | None = None,
) -> tuple[float, np.ndarray]:
    """Joint loss and its exact gradient w.r.t. the logits.

    loss = mean-over-frames BCE(sigmoid(logits[:,0]), boundary)
         + mean-over-frames CE(softmax(logits[:,1:]), function).
    ``valid`` masks padded frames out of both terms; means run over valid
    frames only. Uses log-sum-exp / log-sigmoid forms, stable for any
    finite logits.
    """
    logits = np.asarray(logits, dtype=np.float64)
    t = logits.shape[0]
    if logits.shape != (t, N_OUTPUTS):
        raise ValidationError(f"logits must be T x {N_OUTPUTS}, got {logits.shape}")
    if len(targets) != t:
        raise ValidationError(f"targets length {len(targets)} != logits length {t}")
    if valid is None:
        valid = np.ones(t, dtype=bool)
    valid = np.asarray(valid, dtype=bool)
    n_valid = int(valid.sum())
    if n_valid == 0:
        raise ValidationError("no valid frames in window")

    b = targets.boundary.astype(np.float64)
    x0 = logits[:, 0]
    bce = -(b * _log_sigmoid(x0) + (1.0 - b) * _log_sigmoid(-x0))

    xf = logits[:, 1:]
    xmax = xf.max(axis=1, keepdims=True)
    lse = xmax[:, 0] + np.log(np.exp(xf - xmax).sum(axis=1))
    picked = xf[np.arange(t), targets.function]
    ce = lse - picked

    loss = float(bce[valid].sum() / n_valid + ce[valid].sum() / n_valid)

    dlogits = np.zeros_like(logits)
    dlogits[:, 0] = (_sigmoid(x0) - b) / n_valid
    softmax = np.exp(xf - lse[:, None])
    softmax[np.arange(t), targets.function] -= 1.0
    dlogits[:, 1:] = softmax / n_valid
    dlogits[~valid] = 0.0
    return loss, dlogits


def adamw_step(
    model: ProbeModel,
    state: OptState,
    grads: Gradients,
    lr: float,
    cfg: TrainConfig,
) -> tuple[ProbeModel, OptState]:
    """One decoupled-weight-decay Adam step; mutates and returns model/state.

    The weight-decay term lr * wd * param uses the pre-step parameters,
    applied together with the bias-corrected Adam update.
    """
    if state.m_weight is None:
        state = OptState.zeros_like(model)
    b1, b2 = cfg.betas
    state.step += 1
    t = state.step
    bc1 = 1.0 - b1**t
    bc2 = 1.0 - b2**t
    for p, g, m, v in (
        (model.weight, grads.weight, state.m_weight, state.v_weight),
        (model.bias, grads.bias, state.m_bias, state.v_bias),
    ):
        if g.shape != p.shape:
            raise ValidationError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        update = (m / bc1) / (np.sqrt(v / bc2) + cfg.eps)
        p -= lr * (update + cfg.weight_decay * p)
    return model, state


def lr_at(epoch: int, cfg: TrainConfig) -> float:
    """Learning rate for an epoch: linear warmup then cosine annealing.

    Warmup ramps lr * (epoch + 1) / warmup_epochs over the first
    warmup_epochs epochs; afterwards
    lr * 0.5 * (1 + cos(pi * (epoch - warmup) / (epochs - warmup))).
    Continuous at the junction: lr_at(warmup - 1) == lr_at(warmup) == lr.
    """
    if not 0 <= epoch < cfg.epochs:
        raise ValidationError(f"epoch {epoch} outside [0, {cfg.epochs})")
    if epoch < cfg.warmup_epochs:
        return cfg.lr * (epoch + 1) / cfg.warmup_epochs
    frac = (epoch - cfg.warmup_epochs) / (cfg.epochs - cfg.warmup_epochs)
    return cfg.lr * 0.5 * (1.0 + math.cos(math.pi * frac))


Track = tuple[FeatureMatrix, FrameTargets]


def _window_rows(features: FeatureMatrix, start_s: float, end_s: float) -> np.ndarray:
    """Feature rows covering [start_s, end_s); clamped so it is never empty."""
    fr = features.frame_rate_hz
    i0 = min(round_half_up(start_s * fr), features.frames - 1)
    i1 = min(round_half_up(end_s * fr), features.frames)
    i1 = max(i1, i0 + 1)
    return features.data[i0:i1]


def _training_window(
    track: Track, rng: np.random.Generator, cfg: TrainConfig
) -> tuple[np.ndarray, FrameTargets, np.ndarray]:
    """One random crop of cfg.window_s from a track.

    Tracks shorter than the window are zero-padded on the feature side and
    the padded label frames are masked out of the loss.
    """
    features, targets = track
    lf = cfg.label_frames
    t_track = len(targets)
    if t_track <= lf:
        rows = features.data.astype(np.float64)
        expected = max(1, round_half_up(cfg.window_s * features.frame_rate_hz))
        if rows.shape[0] < expected:
            pad = np.zeros((expected - rows.shape[0], rows.shape[1]))
            rows = np.vstack([rows, pad])
        boundary = np.zeros(lf, dtype=np.int64)
        function = np.zeros(lf, dtype=np.int64)
        boundary[:t_track] = targets.boundary
        function[:t_track] = targets.function
        valid = np.arange(lf) < t_track
        return rows, FrameTargets(boundary, function), valid
    start_label = int(rng.integers(0, t_track - lf + 1))
    start_s = start_label / LABEL_RATE_HZ
    rows = _window_rows(features, start_s, start_s + cfg.window_s).astype(np.float64)
    window = FrameTargets(
        targets.boundary[start_label : start_label + lf],
        targets.function[start_label : start_label + lf],
    )
    return rows, window, np.ones(lf, dtype=bool)


def _batch_step(
    model: ProbeModel,
    state: OptState,
    batch: list[tuple[np.ndarray, FrameTargets, np.ndarray]],
    lr: float,
    cfg: TrainConfig,
) -> float:
    g_w = np.zeros_like(model.weight)
    g_b = np.zeros_like(model.bias)
    total = 0.0
    for rows, window, valid in batch:
        pooled = adaptive_avg_pool(rows, cfg.label_frames)
        logits = forward(model, pooled)
        loss, dlogits = loss_and_grad(logits, window, valid)
        g_w += pooled.T @ dlogits
        g_b += dlogits.sum(axis=0)
        total += loss
    n = len(batch)
    adamw_step(model, state, Gradients(g_w / n, g_b / n), lr, cfg)
    return total / n


def infer_track(model: ProbeModel, m: FeatureMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Whole-track probabilities at 2 Hz.

    The track is split into consecutive non-overlapping 30 s windows; the
    final short window is pooled to proportionally fewer label frames
    (ceil(remaining_s * 2)). Returns (boundary_prob, function_prob) with
    total length ceil(duration_s * 2); function rows are a softmax over the
    seven classes.
    """
    window_s = 30.0
    duration = m.duration_s
    total_frames = label_frame_count(duration)
    frames_per_window = int(round(window_s * LABEL_RATE_HZ))
    n_full = int((duration + 1e-9) // window_s)
    pieces: list[np.ndarray] = []
    for k in range(n_full):
        rows = _window_rows(m, k * window_s, (k + 1) * window_s)
        pieces.append(forward(model, adaptive_avg_pool(rows, frames_per_window)))
    tail = total_frames - n_full * frames_per_window
    if tail > 0:
        rows = _window_rows(m, n_full * window_s, duration)
        pieces.append(forward(model, adaptive_avg_pool(rows, tail)))
    logits = np.vstack(pieces)
    boundary_prob = _sigmoid(logits[:, 0])
    xf = logits[:, 1:]
    xf = xf - xf.max(axis=1, keepdims=True)
    e = np.exp(xf)
    function_prob = e / e.sum(axis=1, keepdims=True)
    return boundary_prob, function_prob


def _default_val_score(model: ProbeModel, val: Sequence[Track]) -> float:
    # Imported lazily: postprocess/metrics sit above this module in the API
    # but the validation score needs the full inference path.
    from .evaluation import validation_score

    return validation_score(model, val)


def train(
    tracks: Sequence[Track],
    val: Sequence[Track],
    cfg: TrainConfig,
    val_score_fn: Callable[[ProbeModel, Sequence[Track]], float] | None = None,
) -> tuple[ProbeModel, list[EpochStats]]:
    """Train the probe; returns the best-validation snapshot and history.

    Each epoch draws one random window per track (seeded), batches them
    cfg.batch_size at a time with one optimizer step per batch, then scores
    the validation tracks. The returned model is the parameter snapshot
    with the highest validation score; ties keep the latest epoch, whose
    parameters have seen more annealing at the same score. The history
    records (loss, lr, val_score) per epoch. Fixed seeds give bit-identical
    runs.
    """
    if not tracks:
        raise ValidationError("empty training set")
    dims = {f.dim for f, _ in list(tracks) + list(val)}
    if len(dims) != 1:
        raise ValidationError(f"tracks disagree on feature dim: {sorted(dims)}")
    if val_score_fn is None:
        val_score_fn = _default_val_score

    rng = np.random.default_rng(cfg.seed)
    model = init_model(dims.pop(), rng)
    state = OptState.zeros_like(model)
    best = model.copy()
    best_score = -math.inf
    history: list[EpochStats] = []
    for epoch in range(cfg.epochs):
        lr = lr_at(epoch, cfg)
        order = rng.permutation(len(tracks))
        windows = [_training_window(tracks[i], rng, cfg) for i in order]
        losses = [
            _batch_step(model, state, windows[i : i + cfg.batch_size], lr, cfg)
            for i in range(0, len(windows), cfg.batch_size)
        ]
        score = val_score_fn(model, val) if val else 0.0
        history.append(EpochStats(epoch, float(np.mean(losses)), lr, score))
        if score >= best_score:
            best_score = score
            best = model.copy()
    return best, history


CHECKPOINT_MAGIC = b"MSAP"


def config_hash(cfg: TrainConfig) -> str:
    payload = json.dumps(
        {k: list(v) if isinstance(v, tuple) else v for k, v in vars(cfg).items()},
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def save_checkpoint(model: ProbeModel, cfg: TrainConfig, path: str | Path) -> None:
    """Checkpoint = magic, u32 header length, JSON header, f64 LE blob."""
    header = json.dumps(
        {
            "feature_dim": model.feature_dim,
            "outputs": ["boundary"] + list(CLASS_NAMES),
            "config_hash": config_hash(cfg),
        },
        sort_keys=True,
    ).encode("utf-8")
    blob = np.ascontiguousarray(model.weight, dtype="<f8").tobytes()
    blob += np.ascontiguousarray(model.bias, dtype="<f8").tobytes()
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(blob)


def load_checkpoint(path: str | Path) -> tuple[ProbeModel, dict]:
    raw = Path(path).read_bytes()
    if raw[:4] != CHECKPOINT_MAGIC:
        raise FormatError(f"bad checkpoint magic {raw[:4]!r}", offset=0)
    (hlen,) = struct.unpack_from("<I", raw, 4)
    header = json.loads(raw[8 : 8 + hlen].decode("utf-8"))
    z = int(header["feature_dim"])
    blob = raw[8 + hlen :]
    expected = (z + 1) * N_OUTPUTS * 8
    if len(blob) != expected:
        raise FormatError(
            f"parameter blob has {len(blob)} bytes, expected {expected}", offset=8 + hlen
        )
    params = np.frombuffer(blob, dtype="<f8")
    weight = params[: z * N_OUTPUTS].reshape(z, N_OUTPUTS)
    bias = params[z * N_OUTPUTS :]
    return ProbeModel(weight=weight.copy(), bias=bias.copy()), header
