"""Check an emitted FAEF file against its encoder's published spec."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .audio import load_wav
from .extract import FRAME_COUNT_TOLERANCE, POOL_HOP_S
from .faef import read_header
from .specs import get_spec


@dataclass
class VerifyReport:
    path: Path
    model_id: str
    frame_rate_hz: float
    dim: int
    frames: int
    duration_s: float | None
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def render(self) -> str:
        lines = [
            f"{self.path}: model={self.model_id} rate={self.frame_rate_hz} Hz "
            f"dim={self.dim} frames={self.frames}"
        ]
        if self.duration_s is not None:
            lines.append(
                f"  duration {self.duration_s:.2f}s -> expected "
                f"~{self.duration_s * self.frame_rate_hz:.1f} frames"
            )
        for p in self.problems:
            lines.append(f"  MISMATCH: {p}")
        if self.ok:
            lines.append("  OK")
        return "\n".join(lines)


def _sidecar(path: Path) -> dict:
    sidecar_path = path.with_name(path.name + ".json")
    if sidecar_path.exists():
        try:
            return json.loads(sidecar_path.read_text(encoding="utf-8"))
        except ValueError:
            return {}
    return {}


def verify(model_id: str, faef_path: str | Path, duration_s: float | None = None) -> VerifyReport:
    """Compare a feature file's header (and frame count, when a duration is
    known) against the encoder spec. The duration comes from the explicit
    argument, else the sidecar's source audio if that file still exists."""
    path = Path(faef_path)
    spec = get_spec(model_id)
    frame_rate, dim, frames = read_header(path)
    sidecar = _sidecar(path)

    pooled = bool(sidecar.get("reencode_pooling"))
    expected_rate = 1.0 / POOL_HOP_S if pooled else spec.frame_rate_hz
    report = VerifyReport(path, model_id, frame_rate, dim, frames, None)
    if frame_rate != expected_rate:
        report.problems.append(
            f"frame rate {frame_rate} Hz, spec says {expected_rate} Hz"
            + (" (re-encode pooled file)" if pooled else "")
        )
    if dim != spec.feature_dim:
        report.problems.append(f"dim {dim}, spec says {spec.feature_dim}")

    if duration_s is None:
        source = sidecar.get("source_audio")
        if source and Path(source).exists():
            samples, rate = load_wav(source)
            duration_s = len(samples) / rate
    if duration_s is not None:
        report.duration_s = duration_s
        expected = duration_s * expected_rate
        if abs(frames - expected) > FRAME_COUNT_TOLERANCE + 0.5:
            report.problems.append(
                f"{frames} frames vs ~{expected:.1f} expected for {duration_s:.2f}s"
            )
    return report
