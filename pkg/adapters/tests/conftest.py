"""Generates the 5-second sample clip the adapter tests run against."""

import cv2
import numpy as np
import pytest

FPS = 15.0
DURATION_S = 5.0
SIZE = (64, 64)
BLANK_FRAMES = 6  # leading faceless frames


def render_frame(i: int, total: int) -> np.ndarray:
    frame = np.zeros((SIZE[1], SIZE[0], 3), dtype=np.uint8)
    if i < BLANK_FRAMES:
        return frame  # black: the no-face case
    # bright block drifting across a dim textured background
    frame[:] = 24
    frame[::4, :] = 40
    x = int((i / total) * (SIZE[0] - 20))
    y = 12 + int(10 * np.sin(i / 5.0))
    cv2.rectangle(frame, (x, y), (x + 18, y + 24), (200, 180, 160), thickness=-1)
    cv2.circle(frame, (x + 9, y + 8), 3, (60, 60, 90), thickness=-1)
    return frame


@pytest.fixture(scope="session")
def clip_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("clips") / "sample.mp4"
    total = int(FPS * DURATION_S)
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"mp4v"), FPS, SIZE)
    assert writer.isOpened()
    for i in range(total):
        writer.write(render_frame(i, total))
    writer.release()
    return path
