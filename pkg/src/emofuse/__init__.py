"""Multimodal emotion fusion for user-research session recordings.

Integrates per-frame facial-emotion streams with timestamped speech-emotion
segments, then answers deterministic UX questions about the session:
dominant-emotion summaries, cross-modal anomalies, confusion hotspots, and
an emotion timeline.
"""

from .anomaly import AnomalyRecord, mapped_anomalies, raw_anomalies
from .errors import (
    EngineError,
    IntervalError,
    IOFailure,
    LabelError,
    MappingError,
    ParamError,
    QueryError,
    RangeError,
    SchemaError,
)
from .evalharness import (
    AlignedSpace,
    ConfusionMatrix,
    EvalReport,
    LabeledPredictions,
    ModelScoreMatrix,
    RankedModel,
    align_label_space,
    align_predictions,
    confusion_matrix,
    metrics,
    parse_grid,
    parse_predictions,
    rank_models,
)
from .fusion import (
    AlignmentWindow,
    FusedRecord,
    align,
    export_fused,
    fuse,
    fuse_segment,
    parse_fused,
)
from .insights import (
    QueryResult,
    TimelineSegment,
    build_timeline,
    dominant_summary,
    filter_by_speech_emotion,
    hotspots,
    keyword_search,
    no_face_records,
    peak_record,
    render_doc,
    session_report,
    timeline_to_doc,
)
from .session import (
    QueryRequest,
    SessionConfig,
    SessionDataset,
    load_fused_session,
    load_session,
    resolve_mapping,
    run_query,
)
from .service import make_server
from .streams import (
    EmotionFrame,
    FrameDominant,
    SpeechSegment,
    dominant_of_frame,
    dominants_of,
    export_frame_dominants,
    export_frames,
    export_speech,
    format_real,
    parse_frame_dominants,
    parse_frames,
    parse_speech,
)
from .taxonomy import (
    BASIC_EMOTIONS,
    NO_FACE,
    NONE_MARKER,
    SPEECH_EMOTIONS,
    UNMAPPED,
    EmotionMapping,
    default_mapping,
    load_mapping,
    map_label,
    save_mapping,
    serialize_mapping,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedSpace",
    "AlignmentWindow",
    "AnomalyRecord",
    "BASIC_EMOTIONS",
    "ConfusionMatrix",
    "EmotionFrame",
    "EmotionMapping",
    "EngineError",
    "EvalReport",
    "FrameDominant",
    "FusedRecord",
    "IOFailure",
    "IntervalError",
    "LabelError",
    "LabeledPredictions",
    "MappingError",
    "ModelScoreMatrix",
    "NONE_MARKER",
    "NO_FACE",
    "ParamError",
    "QueryError",
    "QueryRequest",
    "QueryResult",
    "RangeError",
    "RankedModel",
    "SPEECH_EMOTIONS",
    "SchemaError",
    "SessionConfig",
    "SessionDataset",
    "SpeechSegment",
    "TimelineSegment",
    "UNMAPPED",
    "align",
    "align_label_space",
    "align_predictions",
    "build_timeline",
    "confusion_matrix",
    "default_mapping",
    "dominant_of_frame",
    "dominant_summary",
    "dominants_of",
    "export_frame_dominants",
    "export_frames",
    "export_fused",
    "export_speech",
    "filter_by_speech_emotion",
    "format_real",
    "fuse",
    "fuse_segment",
    "hotspots",
    "keyword_search",
    "load_fused_session",
    "load_mapping",
    "load_session",
    "make_server",
    "map_label",
    "mapped_anomalies",
    "metrics",
    "no_face_records",
    "parse_frame_dominants",
    "parse_frames",
    "parse_fused",
    "parse_grid",
    "parse_predictions",
    "parse_speech",
    "peak_record",
    "rank_models",
    "raw_anomalies",
    "resolve_mapping",
    "render_doc",
    "run_query",
    "save_mapping",
    "serialize_mapping",
    "session_report",
    "timeline_to_doc",
]
