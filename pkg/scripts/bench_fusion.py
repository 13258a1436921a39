#!/usr/bin/env python3
"""Quick timing sweep for the alignment/fusion path and the timeline builder.

Not a rigorous benchmark; it exists to catch accidental quadratic behaviour
when touching fusion.align or insights.build_timeline.
"""

import random
import time

from emofuse import FrameDominant, SpeechSegment, build_timeline, fuse

BASIC = ("angry", "disgust", "fear", "happy", "sad", "surprise", "neutral")


def make_inputs(rng, n_frames, n_segments, duration):
    frames = [
        FrameDominant(round(i * duration / n_frames, 4), rng.choice(BASIC), rng.random())
        for i in range(n_frames)
    ]
    segments = []
    for i in range(n_segments):
        start = rng.uniform(0, duration)
        segments.append(SpeechSegment(f"u{i}", start, start + rng.uniform(0.5, 8.0), "neutral", 0.5))
    return frames, segments


def main():
    rng = random.Random(99)
    print(f"{'frames':>8} {'segments':>9} {'fuse_ms':>9} {'timeline_ms':>12}")
    for n_frames, n_segments in [(1_000, 50), (10_000, 200), (100_000, 500), (500_000, 1_000)]:
        frames, segments = make_inputs(rng, n_frames, n_segments, duration=n_frames / 15.0)
        t0 = time.perf_counter()
        fuse(frames, segments)
        t1 = time.perf_counter()
        build_timeline(frames, min_run_s=1.0)
        t2 = time.perf_counter()
        print(f"{n_frames:>8} {n_segments:>9} {(t1 - t0) * 1e3:>9.1f} {(t2 - t1) * 1e3:>12.1f}")


if __name__ == "__main__":
    main()
