from __future__ import annotations

import math

import numpy as np
import pytest

from scorealign import (
    FRAME_RATE_HZ,
    JumpLabel,
    build_score_matrix,
    unroll,
)
from scorealign.project import write_jltr, write_json
from synth import box_grid, random_noteheads


def write_measures(root, boxes):
    write_json(
        root / "measures.json",
        [{"page": b.page, "x": b.x, "y": b.y, "w": b.w, "h": b.h} for b in boxes],
    )


def write_jumps(root, pairs):
    write_json(root / "jumps.json", [{"from": f, "to": t} for f, t in pairs])


def write_noteheads(root, events):
    write_json(
        root / "noteheads.json",
        [
            {"measure": e.measure_index, "staff": e.staff_index,
             "staff_pos": e.staff_pos, "x_rel": e.x_rel}
            for e in events
        ],
    )


def write_gt(root, order, onsets, duration):
    write_json(
        root / "gt.json",
        {
            "duration": duration,
            "logical_order": list(order.entries),
            "measure_onsets": [float(t) for t in onsets],
        },
    )


def make_repeat_project(root, jump_pairs=((3, 0),)):
    """Four physical measures, one page, the canonical repeat annotation."""
    root.mkdir(parents=True, exist_ok=True)
    write_measures(root, box_grid(4))
    if jump_pairs is not None:
        write_jumps(root, jump_pairs)
    return root


def make_self_aligned_project(root, measure_count=2, jump_pairs=(), seed=0, per_measure=8):
    """A project whose audio is its own score matrix under the identity warp.

    Frame a of the audio equals score row a, so DTW must recover the
    diagonal and every metric is (near) perfect against gt.json.
    """
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    boxes = box_grid(measure_count)
    events = random_noteheads(rng, measure_count, per_measure)
    jumps = [JumpLabel(f, t, i) for i, (f, t) in enumerate(jump_pairs)]
    order = unroll(measure_count, jumps)
    score = build_score_matrix(events, order, [1] * measure_count)

    frames = score.shape[0]
    duration = frames / FRAME_RATE_HZ
    onsets = np.array([48 * k / FRAME_RATE_HZ for k in range(order.num_measures)])

    write_measures(root, boxes)
    write_jumps(root, jump_pairs)
    write_noteheads(root, events)
    write_jltr(root / "onsets.jltr", score)
    write_gt(root, order, onsets, duration)
    return root


def add_page_images(root, page_count=1, size=(60, 80)):
    from PIL import Image

    pages = root / "pages"
    pages.mkdir(exist_ok=True)
    for p in range(page_count):
        Image.new("RGB", size, color=(240, 240, 230)).save(pages / f"{p:03d}.png")
    return pages


@pytest.fixture
def repeat_project(tmp_path):
    return make_repeat_project(tmp_path / "repeat4")


@pytest.fixture
def self_aligned_project(tmp_path):
    return make_self_aligned_project(tmp_path / "selfplay")
