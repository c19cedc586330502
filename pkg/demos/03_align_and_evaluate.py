"""Aligning a synthetic performance and scoring it, with and without the
repeat label.

The piece plays 8 physical measures twice. We render audio for the full
performance from a known time warp, then align it against (a) the score
as printed, 8 measures, and (b) the unrolled score, 16 measures. The
measure-accuracy gap is the whole point of labeling repeats: without the
label, half the performance has no score left to align to.
"""

import math

import numpy as np

from scorealign import (
    BoundingBox,
    GroundTruth,
    JumpLabel,
    NoteheadEvent,
    build_score_matrix,
    dtw,
    metrics,
    path_to_alignment,
    unroll,
)

rng = np.random.default_rng(7)
Q, DURATION = 8, 48.0

# Measure boxes on one page, row-major 4 x 2 grid.
boxes = [
    BoundingBox(page=0, y=(i // 4) / 2, h=0.45, x=(i % 4) / 4, w=0.225)
    for i in range(Q)
]

# Random noteheads, ten per measure on a single (treble) staff.
events = [
    NoteheadEvent(p, 0, int(rng.integers(-3, 15)), float(rng.random()))
    for p in range(Q)
    for _ in range(10)
]

order_printed = unroll(Q)                            # 8 measures, as engraved
order_played = unroll(Q, [JumpLabel(Q - 1, 0, 0)])   # 16 measures, as performed
score_printed = build_score_matrix(events, order_printed, [1] * Q)
score_played = build_score_matrix(events, order_played, [1] * Q)

# Performance timing: piecewise-linear warp from audio time to played
# measure index, with mild rubato around the mean rate.
M = order_played.num_measures
knot_t = np.array([0.0, 14.0, 25.0, 37.0, DURATION])
knot_m = np.array([0.0, 4.2, 8.0, 12.5, float(M)])

frames = math.ceil(DURATION * 31)
frame_m = np.interp(np.arange(frames) / 31, knot_t, knot_m)
audio = score_played[np.minimum((frame_m * 48).astype(int), score_played.shape[0] - 1)]
audio = np.clip(audio + rng.uniform(-0.05, 0.05, audio.shape), 0, 1)

gt = GroundTruth(
    order=order_played,
    boxes=order_played.resolve(boxes),
    onsets=np.interp(np.arange(M), knot_m, knot_t),
    duration=DURATION,
)

for label, score, order in [
    ("without repeat label", score_printed, order_printed),
    ("with repeat label", score_played, order_played),
]:
    result = dtw(score, audio)
    estimate = path_to_alignment(result.path, order.num_measures, 31, DURATION)
    m = metrics(estimate, order.resolve(boxes), gt)
    print(f"{label:21s}  MAcc {m.macc:.3f}  MErr {m.merr:.3f}  MDev {m.mdev:.3f}")
