#!/usr/bin/env python3
"""Synthesize a plausible research-session recording and push it through
the whole pipeline: frames + speech -> fused records -> report + queries.

Writes frames.csv, speech.csv, fused.csv and report.json into --out and
prints the headline numbers. Handy for eyeballing output formats without
hunting for a real recording.
"""

import argparse
import json
import random
import sys
from pathlib import Path

from emofuse import (
    BASIC_EMOTIONS,
    EmotionFrame,
    QueryRequest,
    SessionConfig,
    SpeechSegment,
    export_frames,
    export_speech,
    load_session,
    render_doc,
    run_query,
    session_report,
)

PHRASES = [
    ("Okay, let me find the rental page.", "neutral"),
    ("Where would I even click for that?", "confusion"),
    ("Oh nice, that worked.", "joy"),
    ("I want the two-person one.", "desire"),
    ("Hmm, that's not what I expected.", "disappointment"),
    ("So I'll just type the price here.", "neutral"),
    ("Wait, what does this icon do?", "curiosity"),
    ("That's annoying, it reset my form.", "annoyance"),
    ("Great, the listing is up.", "admiration"),
    ("Let me double check the dates.", "neutral"),
]

# Rough per-state dwell behaviour for the facial stream. The walk lingers
# on neutral and visits the others in short bursts, like real FER output.
STICKINESS = {"neutral": 0.92, "happy": 0.80, "sad": 0.80, "angry": 0.75, "surprise": 0.6, "fear": 0.6, "disgust": 0.6}


def synth_frames(rng: random.Random, duration_s: float, fps: float) -> list[EmotionFrame]:
    frames = []
    state = "neutral"
    n = int(duration_s * fps)
    for i in range(n):
        if rng.random() > STICKINESS.get(state, 0.7):
            state = rng.choice(BASIC_EMOTIONS)
        if rng.random() < 0.03:  # occasional tracking dropouts
            probs = {label: 0.0 for label in BASIC_EMOTIONS}
            frames.append(EmotionFrame(i / fps, probs, face_detected=False))
            continue
        weights = [rng.random() * 0.25 for _ in BASIC_EMOTIONS]
        peak = 1.0 + rng.random() * 2.0
        weights[BASIC_EMOTIONS.index(state)] += peak
        total = sum(weights)
        probs = {label: w / total for label, w in zip(BASIC_EMOTIONS, weights)}
        frames.append(EmotionFrame(i / fps, probs, face_detected=True))
    return frames


def synth_speech(rng: random.Random, duration_s: float) -> list[SpeechSegment]:
    segments = []
    t = rng.uniform(0.5, 2.0)
    while t < duration_s - 4.0:
        text, emotion = rng.choice(PHRASES)
        length = rng.uniform(1.0, 5.0)
        segments.append(SpeechSegment(text, round(t, 2), round(t + length, 2), emotion, round(rng.uniform(0.25, 0.95), 4)))
        t += length + rng.uniform(0.3, 3.0)
    return segments


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("demo_session"))
    parser.add_argument("--duration", type=float, default=120.0, help="seconds of session to synthesize")
    parser.add_argument("--fps", type=float, default=5.0)
    parser.add_argument("--seed", type=int, default=1234)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    frames_path = args.out / "frames.csv"
    speech_path = args.out / "speech.csv"

    export_frames(synth_frames(rng, args.duration, args.fps), frames_path)
    export_speech(synth_speech(rng, args.duration), speech_path)

    session = load_session(frames_path, speech_path, SessionConfig(min_run_s=2.0))
    report = session_report(list(session.fused), list(session.timeline), session.mapping)
    (args.out / "report.json").write_text(render_doc(report), encoding="utf-8")

    print(f"session {session.id!r}: {len(session.fused)} fused records over {session.duration_s:.1f}s")
    print("dominant summary:", json.dumps(report["dominant_summary"]))
    anomalies = run_query(session, QueryRequest("raw-anomalies"))
    print(f"raw anomalies: {len(anomalies.rows)}")
    hotspots = run_query(session, QueryRequest("hotspots"))
    for row in hotspots.rows:
        print(f"  hotspot @ {row['start']:>7.2f}s  {row['speech_emotion']:<14} {row['text']}")
    print(f"wrote {frames_path}, {speech_path}, {args.out / 'report.json'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
