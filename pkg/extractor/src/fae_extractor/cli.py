"""``fae-dump``: dump encoder features for audio files, or verify dumps.

    fae-dump --model <id> --audio <dir-or-file> --out <dir> [--reencode-pooling]
    fae-dump --model <id> --verify <file.faef> [--duration <seconds>]

Exit codes: 0 success, 1 extraction/verification failure, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ExtractionError, FormatError, MissingDependencyError
from .extract import extract
from .specs import REGISTRY, get_spec
from .verify import verify


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fae-dump",
        description="Dump pretrained-audio-encoder features to FAEF files",
    )
    parser.add_argument("--model", required=True, help=f"one of: {', '.join(sorted(REGISTRY))}")
    parser.add_argument("--audio", help="audio file or directory of .wav files")
    parser.add_argument("--out", help="output directory for .faef files")
    parser.add_argument(
        "--reencode-pooling",
        action="store_true",
        help="re-encode 5 s windows with a 0.5 s hop and average to 2 Hz",
    )
    parser.add_argument("--verify", metavar="FAEF", help="check an existing dump instead")
    parser.add_argument("--duration", type=float, help="audio duration for --verify")
    return parser


def _audio_files(root: Path) -> list[Path]:
    if root.is_file():
        return [root]
    return sorted(root.glob("*.wav"))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        get_spec(args.model)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.verify:
        try:
            report = verify(args.model, args.verify, args.duration)
        except (FormatError, FileNotFoundError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(report.render())
        return 0 if report.ok else 1

    if not args.audio or not args.out:
        parser.error("--audio and --out are required unless --verify is given")
    files = _audio_files(Path(args.audio))
    if not files:
        print(f"error: no audio files under {args.audio}", file=sys.stderr)
        return 2
    out_dir = Path(args.out)
    try:
        from .adapters import load_adapter

        adapter = load_adapter(get_spec(args.model))
        for path in files:
            result = extract(
                args.model,
                path,
                out_dir / f"{path.stem}.faef",
                reencode_pooling=args.reencode_pooling,
                adapter=adapter,
            )
            print(
                f"{path.name}: {result.frames} x {result.dim} at {result.frame_rate_hz} Hz "
                f"-> {result.faef_path}"
            )
    except MissingDependencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ExtractionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
