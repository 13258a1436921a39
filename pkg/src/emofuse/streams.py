"""Parsing and normalization of the two modality stream files.

Facial frames arrive as per-frame probability rows over the 7 basic
emotions; speech arrives as timestamped transcript segments with one text
emotion each. Parsers are pure functions of their input, sort their output
by time, and reject malformed data with coded errors.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

from .errors import IntervalError, IOFailure, ParamError, RangeError, SchemaError
from .taxonomy import BASIC_EMOTIONS, NO_FACE, normalize_label, require_speech

# Probability rows whose sum deviates from 1 by more than this are suspect;
# deviations up to SUM_ERROR are warnings (adapter rounding), beyond it errors.
SUM_WARN = 1e-3
SUM_ERROR = 0.05


class ValidationWarning(UserWarning):
    """Non-fatal data-quality issue found while parsing."""


@dataclass(frozen=True)
class EmotionFrame:
    """One video frame's facial-emotion probability vector."""

    timestamp_s: float
    probabilities: dict[str, float]
    face_detected: bool

    def __post_init__(self):
        if set(self.probabilities) != set(BASIC_EMOTIONS):
            raise SchemaError("frame probabilities must cover all 7 basic labels")
        all_zero = all(p == 0.0 for p in self.probabilities.values())
        if self.face_detected == all_zero:
            raise SchemaError("face_detected must be false exactly when all probabilities are 0")


@dataclass(frozen=True)
class FrameDominant:
    """Argmax label of a frame; NO_FACE with score 0 when nothing was detected."""

    timestamp_s: float
    label: str
    score: float


@dataclass(frozen=True)
class SpeechSegment:
    """One transcribed utterance with its text emotion."""

    text: str
    start_s: float
    end_s: float
    emotion: str
    confidence: float


def format_real(x: float) -> str:
    """Render a real with >=6 decimals, losslessly when 6 are not enough."""
    s = f"{x:.6f}"
    return s if float(s) == x else repr(x)


def _open_text(source):
    """Yield (file-like, name, should_close) for a path or open stream."""
    if hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>"), False
    try:
        fh = io.open(source, "r", encoding="utf-8", newline="")
        return fh, str(source), True
    except OSError as exc:
        raise IOFailure(f"cannot read {source}: {exc}") from exc


def _parse_float(cell: str, what: str, where: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise SchemaError(f"{where}: non-numeric {what}: {cell!r}") from None
    if not math.isfinite(value):
        raise SchemaError(f"{where}: non-finite {what}: {cell!r}")
    return value


def _header_index(header: list[str], required: tuple[str, ...], where: str) -> dict[str, int]:
    """Locate required columns by name, case-insensitively; extras are ignored."""
    names = [normalize_label(h) for h in header]
    index = {}
    for col in required:
        if col not in names:
            raise SchemaError(f"{where}: missing column {col!r}")
        index[col] = names.index(col)
    return index


def parse_frames(source, fps: float = None) -> list[EmotionFrame]:
    """Parse a frames file into EmotionFrames sorted by timestamp.

    The time column is either ``timestamp`` (seconds) or ``frame`` (an index
    converted via the required ``fps``). All-zero probability rows become
    face_detected=False, the null-frame convention.
    """
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None

        names = [normalize_label(h) for h in header]
        if "timestamp" in names:
            time_col, by_index = names.index("timestamp"), False
        elif "frame" in names:
            if fps is None:
                raise ParamError(f"{name}: frame-index file requires an fps value")
            time_col, by_index = names.index("frame"), True
        else:
            raise SchemaError(f"{name}: missing column 'timestamp' (or 'frame' with --fps)")
        if by_index and fps <= 0:
            raise ParamError(f"fps must be positive, got {fps}")
        cols = _header_index(header, BASIC_EMOTIONS, f"{name}:1")

        frames = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            where = f"{name}:{lineno}"
            if len(row) < len(header):
                raise SchemaError(f"{where}: expected {len(header)} cells, got {len(row)}")
            t = _parse_float(row[time_col], "frame index" if by_index else "timestamp", where)
            if t < 0:
                raise IntervalError(f"{where}: negative {'frame index' if by_index else 'timestamp'}: {t}")
            if by_index:
                t = t / fps
            probs = {}
            for label in BASIC_EMOTIONS:
                p = _parse_float(row[cols[label]], f"probability ({label})", where)
                if not 0.0 <= p <= 1.0:
                    raise RangeError(f"{where}: probability {label}={p} outside [0, 1]")
                probs[label] = p
            detected = any(p != 0.0 for p in probs.values())
            if detected:
                deviation = abs(math.fsum(probs.values()) - 1.0)
                if deviation > SUM_ERROR:
                    raise RangeError(f"{where}: probabilities sum off by {deviation:.4f} (> {SUM_ERROR})")
                if deviation > SUM_WARN:
                    warnings.warn(
                        f"{where}: probabilities sum off by {deviation:.2e}", ValidationWarning,
                        stacklevel=2,
                    )
            frames.append(EmotionFrame(t, probs, detected))
    finally:
        if close:
            fh.close()

    frames.sort(key=lambda f: f.timestamp_s)  # stable: ties keep file order
    return frames


FRAMES_HEADER = ("timestamp",) + BASIC_EMOTIONS


def export_frames(frames, path) -> None:
    """Write a probability frames file; inverse of parse_frames."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(FRAMES_HEADER)
        for frame in frames:
            writer.writerow(
                [format_real(frame.timestamp_s)]
                + [format_real(frame.probabilities[label]) for label in BASIC_EMOTIONS]
            )


def dominant_of_frame(frame: EmotionFrame) -> FrameDominant:
    """Argmax of the probability vector; canonical-order tie-break."""
    if not frame.face_detected:
        return FrameDominant(frame.timestamp_s, NO_FACE, 0.0)
    best = max(BASIC_EMOTIONS, key=lambda label: frame.probabilities[label])
    # max() keeps the first maximum in iteration order, which is canonical.
    return FrameDominant(frame.timestamp_s, best, frame.probabilities[best])


def dominants_of(frames: list[EmotionFrame]) -> list[FrameDominant]:
    return [dominant_of_frame(f) for f in frames]


def parse_speech(source, strict: bool = True) -> list[SpeechSegment]:
    """Parse a speech segments file, sorted by start time.

    Labels are canonicalized; unknown ones error unless ``strict`` is off.
    """
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None
        cols = _header_index(header, ("text", "start", "end", "emotion", "confidence"), f"{name}:1")

        segments = []
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            where = f"{name}:{lineno}"
            if len(row) < len(header):
                raise SchemaError(f"{where}: expected {len(header)} cells, got {len(row)}")
            text = row[cols["text"]].strip()
            if not text:
                raise SchemaError(f"{where}: empty utterance text")
            start = _parse_float(row[cols["start"]], "start", where)
            end = _parse_float(row[cols["end"]], "end", where)
            if start < 0:
                raise IntervalError(f"{where}: negative start time: {start}")
            if end < start:
                raise IntervalError(f"{where}: end {end} precedes start {start}")
            confidence = _parse_float(row[cols["confidence"]], "confidence", where)
            if not 0.0 <= confidence <= 1.0:
                raise RangeError(f"{where}: confidence {confidence} outside [0, 1]")
            emotion = require_speech(row[cols["emotion"]], strict=strict)
            segments.append(SpeechSegment(text, start, end, emotion, confidence))
    finally:
        if close:
            fh.close()

    segments.sort(key=lambda s: s.start_s)  # stable
    return segments


SPEECH_HEADER = ("text", "start", "end", "emotion", "confidence")


def export_speech(segments, path) -> None:
    """Write a speech segments file; inverse of parse_speech."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(SPEECH_HEADER)
        for seg in segments:
            writer.writerow(
                [
                    seg.text,
                    format_real(seg.start_s),
                    format_real(seg.end_s),
                    seg.emotion,
                    format_real(seg.confidence),
                ]
            )


DOMINANT_HEADER = ("Timestamp", "Highest Score", "Facial Emotion")


def export_frame_dominants(items, path) -> None:
    """Write the three-column dominant file (non_zero_dfFER.csv shape).

    Accepts EmotionFrames (converted via dominant_of_frame) or FrameDominants.
    """
    dominants = [
        dominant_of_frame(it) if isinstance(it, EmotionFrame) else it for it in items
    ]
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(DOMINANT_HEADER)
        for dom in dominants:
            writer.writerow([format_real(dom.timestamp_s), format_real(dom.score), dom.label])


def parse_frame_dominants(source) -> list[FrameDominant]:
    """Read a dominant file back; inverse of export_frame_dominants."""
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None
        cols = _header_index(
            header, ("timestamp", "highest score", "facial emotion"), f"{name}:1"
        )
        dominants = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            where = f"{name}:{lineno}"
            t = _parse_float(row[cols["timestamp"]], "timestamp", where)
            score = _parse_float(row[cols["highest score"]], "score", where)
            if not 0.0 <= score <= 1.0:
                raise RangeError(f"{where}: score {score} outside [0, 1]")
            label = row[cols["facial emotion"]].strip()
            if label != NO_FACE:
                label = normalize_label(label)
                if label not in BASIC_EMOTIONS:
                    raise SchemaError(f"{where}: unknown facial emotion {label!r}")
            elif score != 0.0:
                raise RangeError(f"{where}: no-face row must carry score 0, got {score}")
            dominants.append(FrameDominant(t, label, score))
    finally:
        if close:
            fh.close()
    dominants.sort(key=lambda d: d.timestamp_s)
    return dominants
