"""Cross-modal disagreement detection over fused records.

Raw mode compares the speech label and the facial label literally, so a
"No face detected" row disagrees with any speech label. Mapped mode first
projects the speech label into the basic facial space and only compares
rows where both sides carry usable evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fusion import FusedRecord
from .taxonomy import NO_FACE, NONE_MARKER, UNMAPPED, EmotionMapping, map_label


@dataclass(frozen=True)
class AnomalyRecord:
    """One flagged disagreement; index is the record's position in the session."""

    index: int
    record: FusedRecord
    speech_emotion: str
    fer_emotion: str
    mapped_fer_emotion: str | None = None


def raw_anomalies(records: list[FusedRecord]) -> list[AnomalyRecord]:
    """Literal label mismatches. Rows without any frame evidence are skipped."""
    flagged = []
    for index, rec in enumerate(records):
        if rec.dominant_fer_emotion == NONE_MARKER:
            continue
        if rec.speech_emotion != rec.dominant_fer_emotion:
            flagged.append(
                AnomalyRecord(index, rec, rec.speech_emotion, rec.dominant_fer_emotion)
            )
    return flagged


def mapped_anomalies(
    records: list[FusedRecord],
    mapping: EmotionMapping,
    include_neutral: bool = False,
) -> list[AnomalyRecord]:
    """Mismatches after projecting speech labels into the basic space.

    Skips rows with no frames, no detected face, or a speech label the
    mapping does not cover. Neutral speech is skipped by default because
    most utterances in think-aloud sessions are read as neutral and would
    drown the signal; pass include_neutral=True to keep them.
    """
    flagged = []
    for index, rec in enumerate(records):
        if rec.dominant_fer_emotion in (NONE_MARKER, NO_FACE):
            continue
        mapped = map_label(mapping, rec.speech_emotion, strict=False)
        if mapped == UNMAPPED:
            continue
        if mapped == "neutral" and not include_neutral:
            continue
        if mapped != rec.dominant_fer_emotion:
            flagged.append(
                AnomalyRecord(index, rec, rec.speech_emotion, rec.dominant_fer_emotion, mapped)
            )
    return flagged


def anomaly_to_dict(anomaly: AnomalyRecord) -> dict:
    """JSON-ready shape shared by the CLI and the HTTP service."""
    body = {
        "index": anomaly.index,
        "text": anomaly.record.text,
        "start": anomaly.record.start_s,
        "end": anomaly.record.end_s,
        "speech_emotion": anomaly.speech_emotion,
        "fer_emotion": anomaly.fer_emotion,
    }
    if anomaly.mapped_fer_emotion is not None:
        body["mapped_fer_emotion"] = anomaly.mapped_fer_emotion
    return body
