"""Shared fixtures: hand-checked excerpts from a usability-session recording
of a gear-rental web prototype, plus frame-window synthesis helpers.

The two excerpts were transcribed and verified by hand; several tests and
the acceptance suite treat them as ground truth, so do not edit the values.
"""

from __future__ import annotations

from pathlib import Path

import pytest

from emofuse import FrameDominant, FusedRecord, SpeechSegment

DATA_DIR = Path(__file__).parent / "data"
GRID_PATH = DATA_DIR / "vit_benchmark_grid.csv"

# Speech-only excerpt: the participant starts the tent-rental task.
# Columns: text, start_s, end_s, emotion, confidence.
SPEECH_EXCERPT_ROWS = [
    ("We'll be going to be posting that next part of the task.", 166.92, 170.52, "neutral", 0.3332),
    ("And I'm just going to kind of get us back to the homepage so we can restart.", 171.8, 176.72, "neutral", 0.2554),
    ("Okay.", 179.0, 179.22, "caring", 0.4461),
    ("So next task.", 179.8, 181.2, "neutral", 0.9552),
    ("You're going camping this weekend but you don't have a tent.", 182.34, 185.62, "neutral", 0.2950),
    ("You want to find and rent a two-person tent to use.", 186.02, 189.0, "neutral", 0.7209),
    ("Use Surfboard Board to accomplish this.", 189.52, 191.42, "neutral", 0.8308),
    ("Okay.", 191.42, 192.68, "caring", 0.4461),
    ("So I'm going to get here this time.", 193.62, 196.42, "neutral", 0.3660),
    ("And I'm looking for a tent.", 197.32, 199.64, "neutral", 0.7322),
    ("I want a two-person tent.", 201.74, 205.16, "desire", 0.4894),
    ("I'm not really sure if I should click the menu looking thing or take an icon.", 207.0, 214.26, "confusion", 0.4445),
]

# Fully fused excerpt: the participant lists a tent for rent.
# Columns: text, start_s, end_s, speech emotion, confidence,
#          avg facial score, dominant facial emotion.
FUSED_EXCERPT_ROWS = [
    ("So I'm going to print it out.", 2.92, 5.96, "neutral", 0.326197386, 0.815838384, "neutral"),
    ("So I'm going to click List Your Gear.", 6.44, 9.24, "neutral", 0.321020454, 0.834265302, "neutral"),
    ("And that Own Attent.", 13.82, 15.86, "neutral", 0.661488712, 0.736815128, "angry"),
    ("So I'm going to click Tent.", 16.3, 17.94, "neutral", 0.61031723, 0.745623811, "neutral"),
    ("Give your listing a descriptive title.", 22.0, 25.0, "neutral", 0.385479093, 0.807047625, "neutral"),
    ("And I'm going to click the check box listed.", 25.0, 32.22, "neutral", 0.433583885, 0.77720179, "neutral"),
    ("Yeah, this is the Tent.", 47.0, 48.3, "neutral", 0.461419493, 0.994635472, "happy"),
    ("Sorry.", 49.0, 49.2, "remorse", 0.399663627, 0.995449468, "happy"),
    ("Now I'm going to write a description about my Tent.", 49.2, 55.12, "neutral", 0.69373101, 0.955230098, "happy"),
    ("So this here.", 56.5, 59.78, "neutral", 0.839199185, 0.809589095, "neutral"),
    ("And this is about three people.", 62.52, 68.36, "neutral", 0.952671409, 0.870423921, "neutral"),
    ("Two, and if you move a lot in your sleep, it's pretty light.", 68.36, 82.34, "caring", 0.28432548, 0.86390207, "neutral"),
    ("Okay, I'm going to type that correctly.", 84.12, 87.24, "neutral", 0.349999487, 0.783816478, "neutral"),
    ("Cool.", 88.86, 89.98, "admiration", 0.361270905, 0.577821005, "neutral"),
    ("And I'm going to set my price.", 90.32, 92.08, "neutral", 0.450031757, 0.580378833, "angry"),
    ("Let's see.", 94.56, 95.42, "neutral", 0.903746367, 0.521529078, "neutral"),
    ("Probably just put it up for like $5 per day.", 97.06, 101.04, "neutral", 0.663080513, 0.725880786, "neutral"),
    ("It's like $100 Tent.", 101.42, 102.7, "neutral", 0.824869871, 0.676134035, "sad"),
    ("That would be pretty cool.", 103.1, 104.0, "admiration", 0.665003479, 0.732171007, "neutral"),
    ("I'll pick up Address.", 105.36, 106.62, "neutral", 0.692145646, 0.714218024, "sad"),
    ("Where will people pick it up from you?", 107.9, 109.84, "curiosity", 0.474241048, 0.640520512, "angry"),
    ("And you see a C.", 112.06, 114.12, "neutral", 0.956321597, 0.821540532, "neutral"),
    ("And take a look at this.", 115.4, 117.64, "neutral", 0.684900999, 0.881912405, "neutral"),
    ("Like 10.", 117.78, 118.28, "neutral", 0.887729764, 0.955703162, "neutral"),
    ("What's this?", 118.54, 119.0, "curiosity", 0.488924116, 0.960007565, "neutral"),
    ("And then we've got my product details.", 121.98, 124.76, "neutral", 0.90899092, 0.666946242, "neutral"),
    ("I'm going to click here.", 125.34, 126.4, "neutral", 0.49662587, 0.53009551, "angry"),
]


def speech_rows_as_segments(rows) -> list[SpeechSegment]:
    return [SpeechSegment(*row) for row in rows]


def fused_rows_as_records(rows) -> list[FusedRecord]:
    return [FusedRecord(*row) for row in rows]


def synthesize_window_frames(start: float, end: float, dominant: str, avg: float) -> list[FrameDominant]:
    """Five frames strictly inside [start, end] whose fusion is (dominant, avg).

    Three dominant-label frames with scores averaging avg, two frames of a
    different label. Frames sit at interior points so adjacent windows that
    share a boundary never share a frame.
    """
    width = end - start
    times = [start + width * k / 6.0 for k in range(1, 6)]
    other = "fear" if dominant != "fear" else "disgust"
    spread = 0.002 if 0.002 <= avg <= 0.998 else 0.0
    return [
        FrameDominant(times[0], dominant, avg),
        FrameDominant(times[1], other, 0.3),
        FrameDominant(times[2], dominant, avg - spread),
        FrameDominant(times[3], other, 0.3),
        FrameDominant(times[4], dominant, avg + spread),
    ]


def synthesize_session_frames(rows) -> list[FrameDominant]:
    """Frame stream for a whole fused excerpt, sorted by timestamp."""
    frames: list[FrameDominant] = []
    for text, start, end, emotion, confidence, avg, dominant in rows:
        frames.extend(synthesize_window_frames(start, end, dominant, avg))
    frames.sort(key=lambda f: f.timestamp_s)
    return frames


def write_excerpt_files(tmp_path):
    """Materialize the fused excerpt as frames.csv + speech.csv on disk.

    Frame dominants become full probability rows: the dominant label keeps
    its score and the other six labels split the remainder evenly, which
    preserves the argmax because every synthesized score exceeds 1/7.
    """
    frames_path = tmp_path / "frames.csv"
    speech_path = tmp_path / "speech.csv"
    order = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")
    lines = ["timestamp,angry,disgust,fear,happy,sad,surprise,neutral"]
    for d in synthesize_session_frames(FUSED_EXCERPT_ROWS):
        rest = (1.0 - d.score) / 6.0
        probs = [repr(d.score) if label == d.label else repr(rest) for label in order]
        lines.append(",".join([repr(d.timestamp_s)] + probs))
    frames_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    speech_lines = ["text,start,end,emotion,confidence"]
    for text, start, end, emotion, confidence, _avg, _dom in FUSED_EXCERPT_ROWS:
        escaped = '"' + text.replace('"', '""') + '"'
        speech_lines.append(f"{escaped},{start!r},{end!r},{emotion},{confidence!r}")
    speech_path.write_text("\n".join(speech_lines) + "\n", encoding="utf-8")
    return frames_path, speech_path


@pytest.fixture
def speech_excerpt() -> list[SpeechSegment]:
    return speech_rows_as_segments(SPEECH_EXCERPT_ROWS)


@pytest.fixture
def fused_excerpt() -> list[FusedRecord]:
    return fused_rows_as_records(FUSED_EXCERPT_ROWS)


@pytest.fixture
def excerpt_segments() -> list[SpeechSegment]:
    """The fused excerpt's speech columns alone."""
    return [SpeechSegment(r[0], r[1], r[2], r[3], r[4]) for r in FUSED_EXCERPT_ROWS]


@pytest.fixture
def excerpt_frames() -> list[FrameDominant]:
    return synthesize_session_frames(FUSED_EXCERPT_ROWS)


@pytest.fixture
def grid_path() -> Path:
    return GRID_PATH
