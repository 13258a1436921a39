"""adapt-fer / adapt-speech entry points."""

from __future__ import annotations

import argparse
import sys

from .config import AdapterConfig, AdapterError
from .fer import run_fer_adapter
from .speech import run_speech_adapter


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("video", help="session recording to analyze")
    parser.add_argument("-o", "--output", required=True, help="output CSV path")
    parser.add_argument(
        "--backend",
        choices=("auto", "model", "synthetic"),
        default="auto",
        help="auto tries the pretrained models and falls back to the synthetic backend",
    )


def adapt_fer_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="adapt-fer",
        description="Emit a per-frame facial-emotion probability file for a video.",
    )
    _common(parser)
    parser.add_argument("--fps", type=float, default=None, help="downsample to this frame rate")
    parser.add_argument("--model-id", default="trpakov/vit-face-expression")
    args = parser.parse_args(argv)
    try:
        config = AdapterConfig(
            video_path=args.video,
            fps_override=args.fps,
            fer_model_id=args.model_id,
            backend=args.backend,
        )
        out = run_fer_adapter(config, out_path=args.output)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


def adapt_speech_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="adapt-speech",
        description="Emit a labeled speech-segments file for a video's audio track.",
    )
    _common(parser)
    parser.add_argument("--stt-size", default="base", help="speech-to-text model size")
    parser.add_argument("--text-model-id", default="SamLowe/roberta-base-go_emotions")
    args = parser.parse_args(argv)
    try:
        config = AdapterConfig(
            video_path=args.video,
            stt_model_size=args.stt_size,
            text_model_id=args.text_model_id,
            backend=args.backend,
        )
        out = run_speech_adapter(config, out_path=args.output)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0
