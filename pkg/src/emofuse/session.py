"""Session loading and the named-query dispatch shared by CLI and service.

A session is loaded once (frames + speech -> dominants -> fused records ->
timeline) and is immutable afterwards; every query is a pure read.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .anomaly import anomaly_to_dict, mapped_anomalies, raw_anomalies
from .errors import ParamError, QueryError
from .fusion import FusedRecord, fuse, parse_fused
from .insights import (
    DEFAULT_HOTSPOT_LABELS,
    DEFAULT_MIN_RUN_S,
    QueryResult,
    build_timeline,
    dominant_summary,
    filter_by_speech_emotion,
    fused_to_dict,
    hotspots,
    keyword_search,
    no_face_records,
    peak_record,
    timeline_to_doc,
)
from .streams import FrameDominant, dominants_of, parse_frames, parse_speech
from .taxonomy import EmotionMapping, default_mapping, load_mapping, require_basic

MAPPING_ENV_VAR = "EMOFUSE_MAPPING"


def resolve_mapping(path: str | None = None) -> EmotionMapping:
    """Explicit path wins, then the EMOFUSE_MAPPING environment variable,
    then the built-in grouping."""
    if path:
        return load_mapping(path)
    env_path = os.environ.get(MAPPING_ENV_VAR)
    if env_path:
        return load_mapping(env_path)
    return default_mapping()


@dataclass(frozen=True)
class SessionConfig:
    fps: float | None = None
    min_run_s: float = DEFAULT_MIN_RUN_S
    mapping: EmotionMapping | None = None
    session_id: str | None = None


@dataclass(frozen=True)
class SessionDataset:
    id: str
    fused: tuple[FusedRecord, ...]
    frame_dominants: tuple[FrameDominant, ...] | None
    timeline: tuple
    source_paths: tuple[str, ...]
    min_run_s: float = DEFAULT_MIN_RUN_S
    mapping: EmotionMapping = field(default_factory=default_mapping, compare=False)

    @property
    def duration_s(self) -> float:
        """Largest timestamp the session touches, 0 when empty."""
        candidates = [0.0]
        if self.frame_dominants:
            candidates.append(self.frame_dominants[-1].timestamp_s)
        if self.fused:
            candidates.append(max(rec.end_s for rec in self.fused))
        return max(candidates)

    def metadata(self) -> dict:
        return {
            "schema_version": 1,
            "id": self.id,
            "record_count": len(self.fused),
            "frame_count": len(self.frame_dominants) if self.frame_dominants is not None else None,
            "duration_s": self.duration_s,
            "source_paths": list(self.source_paths),
        }


def load_session(frames_path, speech_path, config: SessionConfig | None = None) -> SessionDataset:
    """Parse both streams, fuse, and segment the timeline, all up front."""
    config = config or SessionConfig()
    frames = parse_frames(frames_path, fps=config.fps)
    dominants = dominants_of(frames)
    segments = parse_speech(speech_path)
    fused = fuse(dominants, segments)
    timeline = build_timeline(dominants, config.min_run_s)
    session_id = config.session_id or Path(str(frames_path)).stem or "session"
    return SessionDataset(
        id=session_id,
        fused=tuple(fused),
        frame_dominants=tuple(dominants),
        timeline=tuple(timeline),
        source_paths=(str(frames_path), str(speech_path)),
        min_run_s=config.min_run_s,
        mapping=config.mapping or default_mapping(),
    )


def load_fused_session(fused_path, config: SessionConfig | None = None) -> SessionDataset:
    """Session backed by an already-integrated file; no frame-level data."""
    config = config or SessionConfig()
    fused = parse_fused(fused_path)
    session_id = config.session_id or Path(str(fused_path)).stem or "session"
    return SessionDataset(
        id=session_id,
        fused=tuple(fused),
        frame_dominants=None,
        timeline=(),
        source_paths=(str(fused_path),),
        min_run_s=config.min_run_s,
        mapping=config.mapping or default_mapping(),
    )


QUERY_NAMES = (
    "dominant-summary",
    "peak",
    "filter-speech",
    "no-face",
    "keyword",
    "hotspots",
    "raw-anomalies",
    "mapped-anomalies",
    "timeline",
)

_KNOWN_PARAMS = {
    "dominant-summary": frozenset(),
    "peak": frozenset({"label"}),
    "filter-speech": frozenset({"labels"}),
    "no-face": frozenset(),
    "keyword": frozenset({"pattern"}),
    "hotspots": frozenset({"labels"}),
    "raw-anomalies": frozenset(),
    "mapped-anomalies": frozenset({"include_neutral", "mapping"}),
    "timeline": frozenset({"min_run"}),
}


@dataclass(frozen=True)
class QueryRequest:
    name: str
    parameters: dict[str, str] = field(default_factory=dict, compare=False)


def _require(request: QueryRequest, key: str) -> str:
    value = request.parameters.get(key, "").strip()
    if not value:
        raise ParamError(f"query {request.name!r} requires parameter {key!r}")
    return value


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes"):
        return True
    if lowered in ("0", "false", "no", ""):
        return False
    raise ParamError(f"parameter {key!r} must be a boolean flag, got {raw!r}")


def run_query(session: SessionDataset, request: QueryRequest) -> QueryResult:
    """Dispatch one named query against a loaded session."""
    name = request.name
    if name not in _KNOWN_PARAMS:
        known = ", ".join(QUERY_NAMES)
        raise QueryError(f"unknown query {name!r}; expected one of: {known}")
    unknown = set(request.parameters) - _KNOWN_PARAMS[name]
    if unknown:
        raise ParamError(f"query {name!r} does not accept: {', '.join(sorted(unknown))}")

    records = list(session.fused)
    position = {id(rec): i for i, rec in enumerate(records)}

    def as_rows(matched):
        return tuple(fused_to_dict(position[id(rec)], rec) for rec in matched)

    params = {k: v for k, v in request.parameters.items()}

    if name == "dominant-summary":
        rows = tuple({"label": label, "count": count} for label, count in dominant_summary(records).items())
    elif name == "peak":
        label = require_basic(_require(request, "label"))
        rec = peak_record(records, label)
        rows = () if rec is None else as_rows([rec])
    elif name == "filter-speech":
        labels = [piece.strip() for piece in _require(request, "labels").split(",") if piece.strip()]
        if not labels:
            raise ParamError("filter-speech requires at least one label")
        rows = as_rows(filter_by_speech_emotion(records, labels))
    elif name == "no-face":
        rows = as_rows(no_face_records(records))
    elif name == "keyword":
        rows = as_rows(keyword_search(records, _require(request, "pattern")))
    elif name == "hotspots":
        raw = request.parameters.get("labels", "").strip()
        labels = (
            frozenset(piece.strip() for piece in raw.split(",") if piece.strip())
            if raw
            else DEFAULT_HOTSPOT_LABELS
        )
        if not labels:
            raise ParamError("hotspots requires at least one label when labels is given")
        rows = as_rows(hotspots(records, labels))
    elif name == "raw-anomalies":
        rows = tuple(anomaly_to_dict(a) for a in raw_anomalies(records))
    elif name == "mapped-anomalies":
        include_neutral = _parse_bool(request.parameters.get("include_neutral", "0"), "include_neutral")
        mapping = session.mapping
        if request.parameters.get("mapping"):
            mapping = load_mapping(request.parameters["mapping"])
        rows = tuple(anomaly_to_dict(a) for a in mapped_anomalies(records, mapping, include_neutral))
        params["include_neutral"] = "1" if include_neutral else "0"
    else:  # timeline
        if session.frame_dominants is None:
            raise QueryError("timeline is unavailable: session was loaded without frame data")
        raw = request.parameters.get("min_run", "").strip()
        if raw:
            try:
                min_run = float(raw)
            except ValueError:
                raise ParamError(f"min_run must be a number, got {raw!r}") from None
            timeline = build_timeline(list(session.frame_dominants), min_run)
        else:
            timeline = list(session.timeline)
        rows = tuple(timeline_to_doc(timeline)["segments"])

    return QueryResult(query_name=name, parameters=params, rows=rows)
