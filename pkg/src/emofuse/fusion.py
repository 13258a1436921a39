"""Temporal alignment and fusion of facial dominants into speech intervals.

Each speech segment collects the frame dominants whose timestamps fall
inside its [start, end] interval (inclusive both ends). The window then
collapses to the most frequent label, scored by the mean of only the
frames carrying that label. Empty windows yield the NONE_MARKER record.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .errors import IntervalError, IOFailure, RangeError, SchemaError
from .streams import FrameDominant, SpeechSegment, _header_index, _open_text, _parse_float, format_real
from .taxonomy import (
    BASIC_EMOTIONS,
    NO_FACE,
    NONE_MARKER,
    dominant_rank,
    normalize_label,
    require_speech,
)


@dataclass(frozen=True)
class FusedRecord:
    """One integrated row: an utterance plus its facial-emotion aggregate."""

    text: str
    start_s: float
    end_s: float
    speech_emotion: str
    speech_confidence: float
    avg_fer_score: float | None
    dominant_fer_emotion: str

    def __post_init__(self):
        if (self.dominant_fer_emotion == NONE_MARKER) != (self.avg_fer_score is None):
            raise SchemaError("avg_fer_score must be absent exactly for NONE_MARKER records")
        if self.dominant_fer_emotion == NO_FACE and self.avg_fer_score != 0.0:
            raise SchemaError("no-face records must carry avg_fer_score 0")


@dataclass(frozen=True)
class AlignmentWindow:
    segment: SpeechSegment
    frames: tuple[FrameDominant, ...]


def align(frames: list[FrameDominant], segments: list[SpeechSegment]) -> list[AlignmentWindow]:
    """One window per segment: the frames inside its inclusive interval.

    Segments are independent, so overlapping intervals share frames and
    frames outside every interval are simply unused.
    """
    ordered = sorted(frames, key=lambda f: f.timestamp_s)  # stable
    timestamps = [f.timestamp_s for f in ordered]
    windows = []
    for seg in segments:
        lo = bisect_left(timestamps, seg.start_s)
        hi = bisect_right(timestamps, seg.end_s)
        windows.append(AlignmentWindow(seg, tuple(ordered[lo:hi])))
    return windows


def fuse_segment(window: AlignmentWindow) -> FusedRecord:
    """Collapse one window to its dominant label and mode-conditional mean.

    Frequency ties break toward the higher mean score, then canonical label
    order with NO_FACE last.
    """
    seg = window.segment
    if not window.frames:
        return FusedRecord(
            seg.text, seg.start_s, seg.end_s, seg.emotion, seg.confidence, None, NONE_MARKER
        )
    scores_by_label: dict[str, list[float]] = {}
    for frame in window.frames:
        scores_by_label.setdefault(frame.label, []).append(frame.score)
    top_count = max(len(scores) for scores in scores_by_label.values())
    dominant = min(
        (label for label, scores in scores_by_label.items() if len(scores) == top_count),
        key=lambda label: (
            -math.fsum(scores_by_label[label]) / top_count,
            dominant_rank(label),
        ),
    )
    avg = math.fsum(scores_by_label[dominant]) / top_count
    return FusedRecord(seg.text, seg.start_s, seg.end_s, seg.emotion, seg.confidence, avg, dominant)


def fuse(frames: list[FrameDominant], segments: list[SpeechSegment]) -> list[FusedRecord]:
    """Fuse every segment, in segment order; |output| == |segments|."""
    return [fuse_segment(window) for window in align(frames, segments)]


FUSED_HEADER = ("text", "start", "end", "emotion", "confidence", "avg_fer_score", "dominant_fer_emotion")


def export_fused(records: list[FusedRecord], path) -> None:
    """Write the integrated file (Test1.csv shape)."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        writer = csv.writer(fh)
        writer.writerow(FUSED_HEADER)
        for rec in records:
            avg = "" if rec.avg_fer_score is None else format_real(rec.avg_fer_score)
            writer.writerow([
                rec.text,
                format_real(rec.start_s),
                format_real(rec.end_s),
                rec.speech_emotion,
                format_real(rec.speech_confidence),
                avg,
                rec.dominant_fer_emotion,
            ])


def parse_fused(source, strict: bool = True) -> list[FusedRecord]:
    """Read an integrated file back, validating record invariants."""
    fh, name, close = _open_text(source)
    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{name}: empty file, expected a header row") from None
        cols = _header_index(header, FUSED_HEADER, f"{name}:1")

        records = []
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

            avg_cell = row[cols["avg_fer_score"]].strip()
            dominant_cell = row[cols["dominant_fer_emotion"]].strip()
            if avg_cell == "":
                avg = None
                if dominant_cell != NONE_MARKER:
                    raise SchemaError(f"{where}: empty avg_fer_score requires dominant {NONE_MARKER!r}")
                dominant = NONE_MARKER
            else:
                avg = _parse_float(avg_cell, "avg_fer_score", where)
                if not 0.0 <= avg <= 1.0:
                    raise RangeError(f"{where}: avg_fer_score {avg} outside [0, 1]")
                if dominant_cell == NONE_MARKER:
                    raise SchemaError(f"{where}: {NONE_MARKER!r} dominant requires an empty avg cell")
                if dominant_cell == NO_FACE:
                    if avg != 0.0:
                        raise SchemaError(f"{where}: no-face rows must carry avg_fer_score 0, got {avg}")
                    dominant = NO_FACE
                else:
                    dominant = normalize_label(dominant_cell)
                    if dominant not in BASIC_EMOTIONS:
                        raise SchemaError(f"{where}: unknown dominant emotion {dominant_cell!r}")
            records.append(FusedRecord(text, start, end, emotion, confidence, avg, dominant))
    finally:
        if close:
            fh.close()
    return records
