"""Speech adapter: video -> transcribed sentences -> labeled segments file.

Pipeline: a transcriber yields timestamped words, the words are concatenated
and re-split at sentence-final punctuation (each sentence spans from its
first word's start to its last word's end), and a text classifier assigns
one of the 28 speech-emotion labels with a confidence.

Transcriber and classifier are pluggable like the FER backends. The real
ones (whisper + a GoEmotions-tuned transformer) import lazily and raise
AdapterError("model unavailable: ...") when missing. The synthetic pair
needs no models: the transcriber yields nothing unless the container has a
decodable audio track it can read (so silent or audio-less clips produce a
header-only file, which the engine parses as an empty session), and the
classifier is a small deterministic keyword lexicon.

Timestamp granularity note: whisper reports word-level timestamps when
word_timestamps=True; older versions only give segment bounds, in which
case words inherit their segment's bounds and sentence edges are segment
edges. Whichever granularity the model provides is what lands in the file.
"""

from __future__ import annotations

import csv
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .config import AdapterConfig, AdapterError

SPEECH_LABELS = (
    "admiration", "amusement", "anger", "annoyance", "approval", "caring",
    "confusion", "curiosity", "desire", "disappointment", "disapproval",
    "disgust", "embarrassment", "excitement", "fear", "gratitude", "grief",
    "joy", "love", "nervousness", "optimism", "pride", "realization",
    "relief", "remorse", "sadness", "surprise", "neutral",
)

SPEECH_HEADER = ("text", "start", "end", "emotion", "confidence")

_SENTENCE_END = re.compile(r"[.!?][\"')\]]*$")


@dataclass(frozen=True)
class Word:
    text: str
    start_s: float
    end_s: float


def assemble_sentences(words: list[Word]) -> list[tuple[str, float, float]]:
    """Concatenate words, split at sentence-final punctuation.

    Returns (text, start, end) with start/end taken from the first and last
    word of each sentence. A trailing run without closing punctuation still
    becomes a sentence.
    """
    sentences = []
    current: list[Word] = []
    for word in words:
        token = word.text.strip()
        if not token:
            continue
        current.append(Word(token, word.start_s, word.end_s))
        if _SENTENCE_END.search(token):
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return [
        (" ".join(w.text for w in sent), sent[0].start_s, sent[-1].end_s)
        for sent in sentences
    ]


# Keyword lexicon for the synthetic classifier. First matching group wins;
# coverage is intentionally shallow, neutral is the backstop.
_LEXICON = (
    ("confusion", ("confused", "confusing", "not sure", "where", "how do", "what is", "huh")),
    ("curiosity", ("wonder", "curious", "what's this", "interesting")),
    ("annoyance", ("annoying", "ugh", "again", "seriously")),
    ("disappointment", ("disappointed", "unfortunately", "expected", "hoped")),
    ("admiration", ("cool", "nice", "great", "awesome", "love this")),
    ("joy", ("yay", "perfect", "worked")),
    ("desire", ("want", "wish", "would like")),
    ("gratitude", ("thanks", "thank you")),
    ("approval", ("yes", "agree", "sure", "makes sense")),
    ("surprise", ("whoa", "wow", "oh!", "unexpected")),
)


class LexiconTextClassifier:
    def classify(self, text: str) -> tuple[str, float]:
        lowered = text.lower()
        for label, keys in _LEXICON:
            hits = sum(1 for key in keys if key in lowered)
            if hits:
                return label, round(min(0.35 + 0.12 * hits, 0.9), 4)
        return "neutral", round(min(0.4 + len(lowered) / 400.0, 0.8), 4)


class ModelTextClassifier:
    def __init__(self, model_id: str):
        try:
            from transformers import pipeline
        except ImportError as exc:
            raise AdapterError(f"model unavailable: {exc}") from exc
        try:
            self.pipe = pipeline("text-classification", model=model_id, top_k=1)
        except Exception as exc:
            raise AdapterError(f"model unavailable: {exc}") from exc

    def classify(self, text: str) -> tuple[str, float]:
        (result,) = self.pipe(text, truncation=True)[0]
        label = result["label"].lower()
        if label not in SPEECH_LABELS:
            label = "neutral"
        return label, float(result["score"])


class SyntheticTranscriber:
    """No-model transcriber.

    Without speech models there is nothing to transcribe, and cv2 cannot
    read audio tracks at all, so every input behaves like a silent clip.
    """

    def transcribe(self, video_path: str) -> list[Word]:
        return []


class WhisperTranscriber:
    def __init__(self, model_size: str):
        try:
            import whisper
        except ImportError as exc:
            raise AdapterError(f"model unavailable: {exc}") from exc
        try:
            self.model = whisper.load_model(model_size)
        except Exception as exc:
            raise AdapterError(f"model unavailable: {exc}") from exc

    def transcribe(self, video_path: str) -> list[Word]:
        result = self.model.transcribe(video_path, word_timestamps=True)
        words = []
        for segment in result.get("segments", []):
            if segment.get("words"):
                for w in segment["words"]:
                    words.append(Word(w["word"], float(w["start"]), float(w["end"])))
            else:  # old whisper: segment granularity only
                words.append(Word(segment["text"], float(segment["start"]), float(segment["end"])))
        return words


def pick_speech_backends(config: AdapterConfig):
    if config.backend == "synthetic":
        return SyntheticTranscriber(), LexiconTextClassifier()
    if config.backend == "model":
        return WhisperTranscriber(config.stt_model_size), ModelTextClassifier(config.text_model_id)
    try:
        return WhisperTranscriber(config.stt_model_size), ModelTextClassifier(config.text_model_id)
    except AdapterError as exc:
        print(f"note: {exc}; using the synthetic backend", file=sys.stderr)
        return SyntheticTranscriber(), LexiconTextClassifier()


def write_speech_csv(rows, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SPEECH_HEADER)
        for text, start, end, emotion, confidence in rows:
            writer.writerow([text, f"{start:.6f}", f"{end:.6f}", emotion, f"{confidence:.6f}"])


def run_speech_adapter(config: AdapterConfig, out_path: Path | None = None,
                       transcriber=None, classifier=None) -> Path:
    """Transcribe, sentence-split, classify, write the speech file."""
    out = Path(out_path) if out_path is not None else config.out_path("speech.csv")
    if transcriber is None or classifier is None:
        picked_t, picked_c = pick_speech_backends(config)
        transcriber = transcriber or picked_t
        classifier = classifier or picked_c
    words = transcriber.transcribe(config.video_path)
    rows = []
    for text, start, end in assemble_sentences(words):
        if end < start:
            raise AdapterError(f"transcriber produced end < start for {text!r}")
        label, confidence = classifier.classify(text)
        rows.append((text, start, end, label, confidence))
    write_speech_csv(rows, out)
    return out
