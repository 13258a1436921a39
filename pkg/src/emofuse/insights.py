"""Deterministic query catalog over fused records, plus timeline segmentation.

Every query is a pure function of its inputs: same records, same answer,
byte for byte. Free-text judgment (e.g. "where did the user suggest an
improvement") is deliberately out of scope; keyword_search and hotspots
are the declared heuristic substitutes.
"""

from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass, field

from .anomaly import anomaly_to_dict, mapped_anomalies, raw_anomalies
from .errors import ParamError, SchemaError
from .fusion import FusedRecord
from .streams import FrameDominant
from .taxonomy import (
    BASIC_EMOTIONS,
    NO_FACE,
    EmotionMapping,
    default_mapping,
    dominant_rank,
    require_speech,
)

# Negative-experience speech labels worth a UX follow-up.
DEFAULT_HOTSPOT_LABELS = frozenset({"confusion", "disappointment", "annoyance", "disapproval"})

# Frame-level flicker at 15-30 fps shreds a timeline; 1 s is the report default.
DEFAULT_MIN_RUN_S = 1.0


@dataclass(frozen=True)
class TimelineSegment:
    start_s: float
    end_s: float
    label: str

    def __post_init__(self):
        if self.end_s < self.start_s:
            raise SchemaError(f"segment end {self.end_s} precedes start {self.start_s}")


@dataclass(frozen=True)
class QueryResult:
    query_name: str
    parameters: dict[str, str] = field(compare=False)
    rows: tuple = ()
    generated_at: str | None = None

    def to_dict(self) -> dict:
        body: dict = {
            "schema_version": 1,
            "query_name": self.query_name,
            "parameters": dict(self.parameters),
            "rows": list(self.rows),
        }
        if self.generated_at is not None:
            body["generated_at"] = self.generated_at
        return body


def fused_to_dict(index: int, rec: FusedRecord) -> dict:
    return {
        "index": index,
        "text": rec.text,
        "start": rec.start_s,
        "end": rec.end_s,
        "speech_emotion": rec.speech_emotion,
        "speech_confidence": rec.speech_confidence,
        "avg_fer_score": rec.avg_fer_score,
        "dominant_fer_emotion": rec.dominant_fer_emotion,
    }


def dominant_summary(records: list[FusedRecord]) -> dict[str, int]:
    """Counts per dominant label, descending; count ties in canonical order."""
    counts: dict[str, int] = {}
    for rec in records:
        counts[rec.dominant_fer_emotion] = counts.get(rec.dominant_fer_emotion, 0) + 1
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], dominant_rank(kv[0])))
    return dict(ordered)


def peak_record(records: list[FusedRecord], label: str) -> FusedRecord | None:
    """The record with the highest facial score among those dominated by label.

    Ranked by avg_fer_score (the facial evidence), not the speech-classifier
    confidence. Ties go to the earliest start.
    """
    candidates = [
        rec for rec in records
        if rec.dominant_fer_emotion == label and rec.avg_fer_score is not None
    ]
    if not candidates:
        return None
    return min(candidates, key=lambda rec: (-rec.avg_fer_score, rec.start_s))


def filter_by_speech_emotion(records: list[FusedRecord], labels) -> list[FusedRecord]:
    """Records whose speech label is in the set, document order."""
    wanted = {require_speech(label) for label in labels}
    return [rec for rec in records if rec.speech_emotion in wanted]


def no_face_records(records: list[FusedRecord]) -> list[FusedRecord]:
    return [rec for rec in records if rec.dominant_fer_emotion == NO_FACE]


def keyword_search(records: list[FusedRecord], pattern: str) -> list[FusedRecord]:
    """Utterances matching a case-insensitive substring, document order.

    A pattern anchored with ^ or $ is compiled as a regular expression
    instead, so "^okay" finds utterances that open with the word.
    """
    if not pattern:
        raise ParamError("search pattern must be non-empty")
    if pattern.startswith("^") or pattern.endswith("$"):
        try:
            rx = re.compile(pattern, re.IGNORECASE)
        except re.error as exc:
            raise ParamError(f"malformed search pattern {pattern!r}: {exc}") from exc
        return [rec for rec in records if rx.search(rec.text)]
    needle = pattern.lower()
    return [rec for rec in records if needle in rec.text.lower()]


def hotspots(records: list[FusedRecord], labels=DEFAULT_HOTSPOT_LABELS) -> list[FusedRecord]:
    """Friction moments: records whose speech label signals a bad experience."""
    matched = filter_by_speech_emotion(records, labels)
    seen: set[int] = set()
    unique = []
    for rec in matched:
        if id(rec) not in seen:
            seen.add(id(rec))
            unique.append(rec)
    return unique


def build_timeline(frame_dominants: list[FrameDominant], min_run_s: float = 0.0) -> list[TimelineSegment]:
    """Run-length encode frame dominants; merge runs shorter than min_run_s.

    Segment i spans [its first frame's t, the next run's first t); the last
    segment closes at the final frame's t. Short runs are absorbed by the
    longer neighbor (ties: the earlier one), shortest first, until every
    remaining run is long enough or only one is left.
    """
    if min_run_s < 0 or min_run_s != min_run_s:
        raise ParamError(f"min_run_s must be a finite non-negative number, got {min_run_s}")
    frames = sorted(frame_dominants, key=lambda f: f.timestamp_s)
    if not frames:
        return []
    if len(frames) == 1:
        only = frames[0]
        return [TimelineSegment(only.timestamp_s, only.timestamp_s, only.label)]

    # Runs as (label, index of first frame); spans derive from frame times.
    labels: list[str] = []
    firsts: list[int] = []
    for i, frame in enumerate(frames):
        if not labels or frame.label != labels[-1]:
            labels.append(frame.label)
            firsts.append(i)

    last_t = frames[-1].timestamp_s
    m = len(labels)
    nxt = list(range(1, m)) + [-1]
    prv = [-1] + list(range(m - 1))
    alive = [True] * m
    count = m

    def start_t(k: int) -> float:
        return frames[firsts[k]].timestamp_s

    def end_t(k: int) -> float:
        return frames[firsts[nxt[k]]].timestamp_s if nxt[k] != -1 else last_t

    def duration(k: int) -> float:
        return end_t(k) - start_t(k)

    # Shortest short run merges first (ties: earliest). Only the surviving
    # run's span changes per merge, so a lazy heap stays consistent: stale
    # entries are detected by re-deriving the duration.
    heap = [(duration(k), firsts[k], k) for k in range(m) if duration(k) < min_run_s]
    heapq.heapify(heap)

    while heap and count > 1:
        dur, _, victim = heapq.heappop(heap)
        if not alive[victim] or duration(victim) != dur:
            continue
        before, after = prv[victim], nxt[victim]
        if before == -1:
            absorber = after
        elif after == -1:
            absorber = before
        else:
            absorber = before if duration(before) >= duration(after) else after
        labels[victim] = labels[absorber]
        if nxt[victim] != -1 and labels[nxt[victim]] == labels[victim]:
            dead = nxt[victim]
            alive[dead] = False
            nxt[victim] = nxt[dead]
            if nxt[dead] != -1:
                prv[nxt[dead]] = victim
            count -= 1
        survivor = victim
        if prv[victim] != -1 and labels[prv[victim]] == labels[victim]:
            keeper = prv[victim]
            alive[victim] = False
            nxt[keeper] = nxt[victim]
            if nxt[victim] != -1:
                prv[nxt[victim]] = keeper
            count -= 1
            survivor = keeper
        if count > 1:
            d = duration(survivor)
            if d < min_run_s:
                heapq.heappush(heap, (d, firsts[survivor], survivor))

    return [
        TimelineSegment(start_t(k), end_t(k), labels[k])
        for k in range(m)
        if alive[k]
    ]


def timeline_to_doc(timeline: list[TimelineSegment]) -> dict:
    return {
        "schema_version": 1,
        "segments": [
            {"start_s": seg.start_s, "end_s": seg.end_s, "label": seg.label}
            for seg in timeline
        ],
    }


def session_report(
    records: list[FusedRecord],
    timeline: list[TimelineSegment],
    mapping: EmotionMapping | None = None,
    include_neutral: bool = False,
    generated_at: str | None = None,
) -> dict:
    """One document aggregating every standing query; fixed section order.

    Identical inputs render byte-identically: generated_at is only present
    when the caller pins it.
    """
    mapping = mapping or default_mapping()
    position = {id(rec): i for i, rec in enumerate(records)}
    doc: dict = {"schema_version": 1}
    if generated_at is not None:
        doc["generated_at"] = generated_at
    doc["record_count"] = len(records)
    doc["dominant_summary"] = dominant_summary(records)
    peaks = {}
    for label in BASIC_EMOTIONS:
        rec = peak_record(records, label)
        if rec is not None:
            peaks[label] = fused_to_dict(position[id(rec)], rec)
    doc["peaks_by_avg_fer_score"] = peaks
    doc["hotspots"] = [fused_to_dict(position[id(r)], r) for r in hotspots(records)]
    doc["raw_anomalies"] = [anomaly_to_dict(a) for a in raw_anomalies(records)]
    doc["mapped_anomalies"] = [
        anomaly_to_dict(a) for a in mapped_anomalies(records, mapping, include_neutral)
    ]
    doc["no_face"] = [fused_to_dict(position[id(r)], r) for r in no_face_records(records)]
    doc["timeline"] = timeline_to_doc(timeline)["segments"]
    doc["notes"] = {
        "peaks": "ranked by avg_fer_score, ties to the earliest start",
        "hotspots": "speech labels " + ", ".join(sorted(DEFAULT_HOTSPOT_LABELS)) + "; a keyword heuristic, not semantic judgment",
    }
    return doc


def render_doc(doc: dict) -> str:
    """Canonical serialization used by the CLI and report files."""
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
