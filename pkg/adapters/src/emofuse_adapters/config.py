"""Adapter configuration and the error type every backend failure maps to."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path


class AdapterError(RuntimeError):
    """Unrecoverable adapter failure: bad input, undecodable video, missing model."""


@dataclass(frozen=True)
class AdapterConfig:
    video_path: str
    output_dir: str = "."
    fps_override: float | None = None
    fer_model_id: str = "trpakov/vit-face-expression"
    stt_model_size: str = "base"
    text_model_id: str = "SamLowe/roberta-base-go_emotions"
    backend: str = "auto"  # auto | model | synthetic

    def __post_init__(self):
        if not os.path.exists(self.video_path):
            raise AdapterError(f"video not found: {self.video_path}")
        if self.fps_override is not None and not self.fps_override > 0:
            raise AdapterError(f"fps_override must be > 0, got {self.fps_override}")
        if self.backend not in ("auto", "model", "synthetic"):
            raise AdapterError(f"unknown backend {self.backend!r}")

    def out_path(self, filename: str) -> Path:
        path = Path(self.output_dir)
        path.mkdir(parents=True, exist_ok=True)
        return path / filename
