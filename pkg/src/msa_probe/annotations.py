"""Section annotations: parsing, 7-class label mapping, and frame targets.

The on-disk format is one segment per line, ``"<start_seconds> <label>"``,
terminated by a line whose label is the literal token ``end`` carrying the
track duration.  Lines starting with ``#`` and blank lines are ignored.
Raw labels are normalized onto seven section-function classes through a
configurable mapping table.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Mapping

import numpy as np

from ._util import LABEL_RATE_HZ, label_frame_count, round_half_up
from .errors import ParseError, ValidationError


class FunctionClass(IntEnum):
    """The seven section-function classes, in fixed id order."""

    intro = 0
    verse = 1
    chorus = 2
    bridge = 3
    inst = 4
    outro = 5
    silence = 6


CLASS_NAMES: tuple[str, ...] = tuple(c.name for c in FunctionClass)
NUM_CLASSES = len(FunctionClass)

# Default raw-label mapping. Keys ending in '*' match by prefix, other keys
# match exactly; lookup happens after stripping trailing digits/underscores
# and lowercasing. Unknown labels fall back to FALLBACK_CLASS. The table is
# deliberately a plain {pattern: class-name} dict so a corrected table can be
# loaded from JSON without a code change.
DEFAULT_LABEL_MAP: dict[str, str] = {
    "intro*": "intro",
    "fadein": "intro",
    "verse*": "verse",
    "prechorus*": "verse",
    "chorus*": "chorus",
    "refrain*": "chorus",
    "hook*": "chorus",
    "bridge*": "bridge",
    "transition*": "bridge",
    "inst*": "inst",
    "solo*": "inst",
    "break*": "inst",
    "drop*": "inst",
    "outro*": "outro",
    "fadeout": "outro",
    "end": "outro",
    "silence": "silence",
    "quiet": "silence",
}

FALLBACK_CLASS = FunctionClass.inst

_TRAILING_JUNK = re.compile(r"[0-9_]+$")


def load_label_map(path: str | Path) -> dict[str, str]:
    """Load a {pattern: class-name} mapping table from a JSON file."""
    table = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(table, dict):
        raise ValidationError(f"label map {path}: expected a JSON object")
    for pattern, name in table.items():
        if name not in CLASS_NAMES:
            raise ValidationError(
                f"label map {path}: {pattern!r} maps to unknown class {name!r}"
            )
    return table


def map_label(raw: str, table: Mapping[str, str] | None = None) -> FunctionClass:
    """Map a raw section label onto one of the seven function classes.

    The label is stripped of trailing digits/underscores and lowercased, then
    looked up in the table (exact keys first, then longest '*' prefix).
    Unknown labels map to ``inst``, so the function is total.
    """
    if not raw:
        raise ValidationError("empty label")
    if table is None:
        table = DEFAULT_LABEL_MAP
    key = _TRAILING_JUNK.sub("", raw.strip()).lower()
    exact = table.get(key)
    if exact is not None:
        return FunctionClass[exact]
    best: str | None = None
    best_len = -1
    for pattern, name in table.items():
        if pattern.endswith("*"):
            stem = pattern[:-1]
            if key.startswith(stem) and len(stem) > best_len:
                best, best_len = name, len(stem)
    if best is not None:
        return FunctionClass[best]
    return FALLBACK_CLASS


@dataclass(frozen=True)
class SegmentAnnotation:
    """Non-overlapping contiguous segments covering ``[0, duration_s]``.

    ``segments`` is an ordered tuple of (start_s, FunctionClass); segment i
    ends where segment i+1 starts, and the last segment ends at duration_s.
    """

    segments: tuple[tuple[float, FunctionClass], ...]
    duration_s: float

    def __post_init__(self):
        object.__setattr__(
            self,
            "segments",
            tuple((float(s), FunctionClass(int(c))) for s, c in self.segments),
        )
        object.__setattr__(self, "duration_s", float(self.duration_s))
        if not self.segments:
            raise ValidationError("annotation has no segments")
        if not (self.duration_s > 0):
            raise ValidationError(f"duration must be positive, got {self.duration_s}")
        starts = [s for s, _ in self.segments]
        if starts[0] != 0:
            raise ValidationError(f"first segment must start at 0, got {starts[0]}")
        for a, b in zip(starts, starts[1:]):
            if not b > a:
                raise ValidationError(f"segment starts not strictly ascending: {a} -> {b}")
        if starts[-1] >= self.duration_s:
            raise ValidationError(
                f"segment start {starts[-1]} is not before duration {self.duration_s}"
            )

    @property
    def starts(self) -> np.ndarray:
        return np.array([s for s, _ in self.segments], dtype=np.float64)

    @property
    def classes(self) -> np.ndarray:
        return np.array([int(c) for _, c in self.segments], dtype=np.int64)

    def class_at(self, times_s: np.ndarray) -> np.ndarray:
        """Class ids of the segments containing each time (clamped into range)."""
        idx = np.searchsorted(self.starts, np.asarray(times_s, dtype=np.float64), side="right") - 1
        return self.classes[np.clip(idx, 0, len(self.segments) - 1)]


@dataclass
class FrameTargets:
    """Per-frame training targets on the 2 Hz label grid.

    ``boundary`` holds 0/1 section-onset targets, ``function`` holds class
    ids, both of length ceil(duration_s * 2).
    """

    boundary: np.ndarray
    function: np.ndarray
    frame_rate_hz: float = LABEL_RATE_HZ

    def __post_init__(self):
        self.boundary = np.asarray(self.boundary, dtype=np.int64)
        self.function = np.asarray(self.function, dtype=np.int64)
        if self.boundary.shape != self.function.shape or self.boundary.ndim != 1:
            raise ValidationError("boundary/function must be 1-D vectors of equal length")

    def __len__(self) -> int:
        return len(self.boundary)


def parse_annotation(
    text: str, label_map: Mapping[str, str] | None = None
) -> SegmentAnnotation:
    """Parse annotation text into a validated SegmentAnnotation.

    Raises ParseError (with line number) for malformed lines and
    ValidationError for ordering violations or a missing ``end`` marker.
    """
    text = text.lstrip("﻿")
    if not text or not text.strip():
        raise ValidationError("empty annotation text")
    raw_segments: list[tuple[float, str]] = []
    duration: float | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if duration is not None:
            raise ValidationError(f"line {lineno}: content after the 'end' marker")
        parts = line.split(maxsplit=1)
        if len(parts) != 2:
            raise ParseError(f"expected '<start> <label>', got {line!r}", line=lineno)
        try:
            start = float(parts[0])
        except ValueError:
            raise ParseError(f"bad start time {parts[0]!r}", line=lineno) from None
        label = parts[1].strip()
        if label == "end":
            duration = start
            continue
        if start < 0:
            raise ParseError(f"negative start time {start}", line=lineno)
        raw_segments.append((start, label))
    if duration is None:
        raise ValidationError("missing final 'end' line")
    if not raw_segments:
        raise ValidationError("annotation has no segments before 'end'")
    for (a, _), (b, _) in zip(raw_segments, raw_segments[1:]):
        if not b > a:
            raise ValidationError(f"duplicate or unsorted start times: {a} then {b}")
    segments = tuple((s, map_label(lbl, label_map)) for s, lbl in raw_segments)
    return SegmentAnnotation(segments=segments, duration_s=duration)


def serialize_annotation(ann: SegmentAnnotation) -> str:
    """Render an annotation back to text. parse(serialize(a)) == a."""
    lines = [f"{start!r} {cls.name}" for start, cls in ann.segments]
    lines.append(f"{ann.duration_s!r} end")
    return "\n".join(lines) + "\n"


def rasterize(ann: SegmentAnnotation) -> FrameTargets:
    """Rasterize segments to 2 Hz frame targets.

    Function targets sample the segment containing each frame center
    (k + 0.5) / 2; boundary targets mark the frame nearest each segment
    start, nearest-frame rounding, clamped into range.
    """
    n = label_frame_count(ann.duration_s)
    centers = (np.arange(n, dtype=np.float64) + 0.5) / LABEL_RATE_HZ
    function = ann.class_at(centers)
    boundary = np.zeros(n, dtype=np.int64)
    for start, _ in ann.segments:
        k = min(round_half_up(start * LABEL_RATE_HZ), n - 1)
        boundary[k] = 1
    return FrameTargets(boundary=boundary, function=function)


def boundaries_of(ann: SegmentAnnotation) -> list[float]:
    """All boundary times in seconds, endpoints included: [0, ..., duration]."""
    return [float(s) for s, _ in ann.segments] + [float(ann.duration_s)]
