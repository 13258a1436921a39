"""Frame extraction with fps downsampling.

The engine's frames files carry timestamps in seconds; we emit one row per
*analyzed* frame, so when the target fps is below the native rate we skip
frames by an integer stride and the effective fps is native_fps / stride.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import cv2
import numpy as np

from .config import AdapterError


@dataclass(frozen=True)
class VideoInfo:
    native_fps: float
    frame_count: int
    stride: int

    @property
    def effective_fps(self) -> float:
        return self.native_fps / self.stride


def probe(video_path: str, fps_override: float | None) -> VideoInfo:
    cap = cv2.VideoCapture(video_path)
    try:
        if not cap.isOpened():
            raise AdapterError(f"cannot decode video: {video_path}")
        native = cap.get(cv2.CAP_PROP_FPS)
        count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        if not native or native <= 0:
            raise AdapterError(f"video reports no frame rate: {video_path}")
    finally:
        cap.release()
    if fps_override is None or fps_override >= native:
        stride = 1
    else:
        stride = max(1, round(native / fps_override))
    return VideoInfo(native_fps=native, frame_count=count, stride=stride)


def iter_frames(video_path: str, info: VideoInfo) -> Iterator[np.ndarray]:
    """Yield BGR frames at the effective rate."""
    cap = cv2.VideoCapture(video_path)
    if not cap.isOpened():
        raise AdapterError(f"cannot decode video: {video_path}")
    try:
        native_index = 0
        while True:
            ok, frame = cap.read()
            if not ok:
                break
            if native_index % info.stride == 0:
                yield frame
            native_index += 1
    finally:
        cap.release()
