"""Emotion label spaces and the cross-taxonomy mapping.

Two label spaces coexist: the 7 basic emotions emitted by the facial
classifier and the 28-label space (27 GoEmotions categories + neutral)
emitted by the text classifier. An :class:`EmotionMapping` projects speech
labels into the basic space for cross-modal comparison.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

from .errors import IOFailure, LabelError, MappingError

# Canonical ordering; ties throughout the engine resolve in this order.
BASIC_EMOTIONS = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")

SPEECH_EMOTIONS = (
    "admiration", "amusement", "anger", "annoyance", "approval", "caring",
    "confusion", "curiosity", "desire", "disappointment", "disapproval",
    "disgust", "embarrassment", "excitement", "fear", "gratitude", "grief",
    "joy", "love", "nervousness", "optimism", "pride", "realization",
    "relief", "remorse", "sadness", "surprise", "neutral",
)

_BASIC_SET = frozenset(BASIC_EMOTIONS)
_SPEECH_SET = frozenset(SPEECH_EMOTIONS)

# Sentinel labels. NO_FACE marks frames where detection found nothing
# (all-zero probability rows); NONE_MARKER marks segments whose interval
# contained no frames at all. Both spellings double as the file encoding.
NO_FACE = "No face detected"
NONE_MARKER = "None"

# Returned by map_label when the mapping omits the key. Never a label.
UNMAPPED = "<unmapped>"

# Ordering used when summaries and tie-breaks must rank sentinels too:
# the 7 basic labels first, then NO_FACE, then NONE_MARKER.
_DOMINANT_ORDER = {label: i for i, label in enumerate(BASIC_EMOTIONS)}
_DOMINANT_ORDER[NO_FACE] = len(BASIC_EMOTIONS)
_DOMINANT_ORDER[NONE_MARKER] = len(BASIC_EMOTIONS) + 1


def normalize_label(raw: str) -> str:
    """Lowercase and trim a label; 'Sad'/'sad'/'SAD' are the same label."""
    return raw.strip().lower()


def require_basic(label: str) -> str:
    label = normalize_label(label)
    if label not in _BASIC_SET:
        raise LabelError(f"not a basic emotion label: {label!r}")
    return label


def require_speech(label: str, strict: bool = True) -> str:
    """Canonicalize a speech label; unknown labels error unless lenient."""
    label = normalize_label(label)
    if label not in _SPEECH_SET and strict:
        raise LabelError(f"not a speech emotion label: {label!r}")
    return label


def dominant_rank(label: str) -> int:
    """Canonical sort rank of a dominant label (sentinels last)."""
    try:
        return _DOMINANT_ORDER[label]
    except KeyError:
        raise LabelError(f"not a dominant label: {label!r}") from None


@dataclass(frozen=True)
class EmotionMapping:
    """Partial map from speech labels to basic labels.

    Not necessarily total: lookups on absent keys yield UNMAPPED.
    """

    name: str
    entries: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for key, value in self.entries.items():
            if key not in _SPEECH_SET:
                raise LabelError(f"mapping key is not a speech label: {key!r}")
            if value not in _BASIC_SET:
                raise LabelError(f"mapping value is not a basic label: {value!r}")

    def __getitem__(self, label: str) -> str:
        return self.entries[label]

    def __contains__(self, label: str) -> bool:
        return label in self.entries

    def __len__(self) -> int:
        return len(self.entries)


# Ekman-style grouping of the speech taxonomy onto the 7 basic labels.
# Total by construction: every speech label appears exactly once.
_DEFAULT_GROUPS = {
    "happy": ("admiration", "amusement", "approval", "caring", "desire",
              "excitement", "gratitude", "joy", "love", "optimism", "pride",
              "relief"),
    "angry": ("anger", "annoyance", "disapproval"),
    "sad": ("sadness", "disappointment", "embarrassment", "grief", "remorse"),
    "fear": ("fear", "nervousness"),
    "surprise": ("surprise", "curiosity", "confusion", "realization"),
    "disgust": ("disgust",),
    "neutral": ("neutral",),
}

_DEFAULT_ENTRIES = {
    speech: basic for basic, group in _DEFAULT_GROUPS.items() for speech in group
}
assert len(_DEFAULT_ENTRIES) == len(SPEECH_EMOTIONS)


def default_mapping() -> EmotionMapping:
    """Built-in total mapping over all 28 speech labels."""
    return EmotionMapping(name="default", entries=dict(_DEFAULT_ENTRIES))


def map_label(mapping: EmotionMapping, label: str, strict: bool = True) -> str:
    """Project a speech label into the basic space.

    Returns UNMAPPED when the mapping omits the key. Unknown labels raise
    LabelError in strict mode and map to UNMAPPED otherwise.
    """
    label = normalize_label(label)
    if label not in _SPEECH_SET:
        if strict:
            raise LabelError(f"not a speech emotion label: {label!r}")
        return UNMAPPED
    return mapping.entries.get(label, UNMAPPED)


_MAPPING_HEADER = "speech_label,basic_label"


def load_mapping(source, name: str = None) -> EmotionMapping:
    """Parse a mapping file: one ``speech_label,basic_label`` pair per line.

    An optional header line is skipped; duplicate keys are an error.
    """
    text, src_name = _read_text(source)
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if lineno == 1 and normalize_label(line) == _MAPPING_HEADER:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MappingError(f"{src_name}:{lineno}: expected 'speech_label,basic_label', got {line!r}")
        key, value = normalize_label(parts[0]), normalize_label(parts[1])
        if key not in _SPEECH_SET:
            raise MappingError(f"{src_name}:{lineno}: unknown speech label {key!r}")
        if value not in _BASIC_SET:
            raise MappingError(f"{src_name}:{lineno}: unknown basic label {value!r}")
        if key in entries:
            raise MappingError(f"{src_name}:{lineno}: duplicate key {key!r}")
        entries[key] = value
    return EmotionMapping(name=name or src_name, entries=entries)


def serialize_mapping(mapping: EmotionMapping) -> str:
    """Render a mapping in the file format load_mapping accepts."""
    lines = [_MAPPING_HEADER]
    # Stable order: speech-taxonomy order, so serialization is deterministic.
    for key in SPEECH_EMOTIONS:
        if key in mapping.entries:
            lines.append(f"{key},{mapping.entries[key]}")
    return "\n".join(lines) + "\n"


def save_mapping(mapping: EmotionMapping, path) -> None:
    try:
        fh = open(path, "w", encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    with fh:
        fh.write(serialize_mapping(mapping))


def _read_text(source) -> tuple[str, str]:
    """Read text from a path or file-like object; returns (text, name)."""
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    try:
        with io.open(source, "r", encoding="utf-8") as fh:
            return fh.read(), str(source)
    except OSError as exc:
        raise IOFailure(f"cannot read {source}: {exc}") from exc
