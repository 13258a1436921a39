"""Facial-emotion adapter: video frames -> per-frame probability rows.

Two interchangeable frame classifiers sit behind one interface:

- "model": face detection + a pretrained ViT expression classifier. Imports
  are lazy; any missing dependency or weight download failure surfaces as
  AdapterError("model unavailable: ...").
- "synthetic": no models. Deterministic pseudo-probabilities derived from
  frame statistics, with a variance gate standing in for face detection.
  Exists so the pipeline (and CI) runs on machines without model access;
  the numbers are stable but meaningless.

Either way the output file is identical in shape: the engine's frames
schema, one row per analyzed frame, all-zero probabilities when no face
was found.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from .config import AdapterConfig, AdapterError
from .video import iter_frames, probe

BASIC_ORDER = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")
FRAMES_HEADER = "timestamp," + ",".join(BASIC_ORDER)

# Below this grayscale stddev a frame is treated as faceless by the
# synthetic backend (black/blank frames, lens covered).
FLAT_FRAME_STD = 1.5


class SyntheticFrameClassifier:
    """Deterministic stand-in classifier; see module docstring."""

    def probabilities(self, frame_bgr: np.ndarray) -> tuple[float, ...] | None:
        import cv2

        small = cv2.resize(frame_bgr, (32, 32), interpolation=cv2.INTER_AREA)
        gray = cv2.cvtColor(small, cv2.COLOR_BGR2GRAY).astype(np.float64)
        if gray.std() < FLAT_FRAME_STD:
            return None
        bands = gray.reshape(8, 4, 32).mean(axis=(1, 2))  # 8 horizontal bands
        weights = bands[:7] + 1.0
        weights = weights / weights.sum()
        # lean neutral so fused sessions look like real FER output
        weights[6] += 0.6 + gray.mean() / 512.0
        probs = weights / weights.sum()
        return tuple(float(p) for p in probs)


class ModelFrameClassifier:
    """MTCNN face detection + ViT expression head, loaded lazily."""

    def __init__(self, model_id: str):
        try:
            import torch  # noqa: F401
            from facenet_pytorch import MTCNN
            from transformers import AutoImageProcessor, AutoModelForImageClassification
        except ImportError as exc:
            raise AdapterError(f"model unavailable: {exc}") from exc
        try:
            self.detector = MTCNN(keep_all=False)
            self.processor = AutoImageProcessor.from_pretrained(model_id)
            self.model = AutoModelForImageClassification.from_pretrained(model_id)
        except Exception as exc:  # hub/network/weight failures
            raise AdapterError(f"model unavailable: {exc}") from exc
        id2label = self.model.config.id2label
        self.order = [None] * len(id2label)
        for idx, label in id2label.items():
            canon = str(label).strip().lower()
            if canon == "angry" or canon == "anger":
                canon = "angry"
            if canon not in BASIC_ORDER:
                raise AdapterError(f"model unavailable: unexpected label {label!r} in {model_id}")
            self.order[int(idx)] = BASIC_ORDER.index(canon)

    def probabilities(self, frame_bgr: np.ndarray) -> tuple[float, ...] | None:
        import torch
        from PIL import Image

        rgb = frame_bgr[:, :, ::-1]
        image = Image.fromarray(rgb)
        box, _ = self.detector.detect(image)
        if box is None or len(box) == 0:
            return None
        x0, y0, x1, y1 = [int(v) for v in box[0]]
        crop = image.crop((max(x0, 0), max(y0, 0), max(x1, 1), max(y1, 1)))
        inputs = self.processor(images=crop, return_tensors="pt")
        with torch.no_grad():
            logits = self.model(**inputs).logits[0]
        soft = torch.softmax(logits, dim=-1).tolist()
        out = [0.0] * len(BASIC_ORDER)
        for idx, p in enumerate(soft):
            out[self.order[idx]] = float(p)
        return tuple(out)


def pick_frame_classifier(config: AdapterConfig):
    if config.backend == "synthetic":
        return SyntheticFrameClassifier()
    if config.backend == "model":
        return ModelFrameClassifier(config.fer_model_id)
    try:
        return ModelFrameClassifier(config.fer_model_id)
    except AdapterError as exc:
        print(f"note: {exc}; using the synthetic backend", file=sys.stderr)
        return SyntheticFrameClassifier()


def write_frames_csv(rows, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(FRAMES_HEADER + "\n")
        for timestamp, probs in rows:
            fh.write(f"{timestamp:.6f}," + ",".join(f"{p:.6f}" for p in probs) + "\n")


def run_fer_adapter(config: AdapterConfig, out_path: Path | None = None) -> Path:
    """Analyze the video and write the frames file; returns its path."""
    out = Path(out_path) if out_path is not None else config.out_path("frames.csv")
    info = probe(config.video_path, config.fps_override)
    classifier = pick_frame_classifier(config)
    zero = tuple(0.0 for _ in BASIC_ORDER)
    rows = []
    for k, frame in enumerate(iter_frames(config.video_path, info)):
        probs = classifier.probabilities(frame)
        rows.append((k / info.effective_fps, zero if probs is None else probs))
    write_frames_csv(rows, out)
    return out
