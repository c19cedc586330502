"""Dynamic time warping between score and audio feature matrices.

Standard DTW with the three equal-weighted steps (1,1), (0,1), (1,0) and
Euclidean distance between feature rows, endpoints pinned to the two
matrix corners. The dynamic program fills the cumulative-cost table one
anti-diagonal at a time (cells on a diagonal are independent, so each
sweep is a vectorized numpy step); the backtrace then recovers one
optimal path, breaking cost ties by preferring the diagonal step, then
the audio-advance step (0,1), then the score-advance step (1,0). The
tie-break makes results deterministic and independent of how the cost
matrix was computed internally.

The optimal path is turned into a measure-aware alignment by averaging,
for each audio frame, the score rows matched to it; dividing by 48 rows
per measure yields a fractional measure index per frame, which is then
resampled onto the 100 Hz alignment grid.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import cdist

from .model import SAMPLE_RATE_HZ, Alignment, n_samples
from .features import FRAME_RATE_HZ, NUM_PITCHES, ROWS_PER_MEASURE


class DtwResult(NamedTuple):
    """An optimal warp path and its total cost.

    ``path`` is an (L, 2) int array of (score_row, audio_row) pairs from
    (0, 0) to the opposite corner; the cost is the sum of Euclidean row
    distances over the visited cells, accumulated in path order.
    """

    path: np.ndarray
    cost: float


def _cost_matrix(score: np.ndarray, audio: np.ndarray) -> np.ndarray:
    return cdist(score, audio, metric="euclidean")


def dtw(score: np.ndarray, audio: np.ndarray) -> DtwResult:
    """Align two feature matrices and return an optimal corner-to-corner path.

    Args:
        score: (rows, 88) matrix.
        audio: (frames, 88) matrix.

    Raises:
        ValueError: on empty inputs or column-count mismatch.
    """
    score = np.asarray(score, dtype=float)
    audio = np.asarray(audio, dtype=float)
    if score.ndim != 2 or audio.ndim != 2 or score.shape[0] == 0 or audio.shape[0] == 0:
        raise ValueError("dtw needs two non-empty 2-D matrices")
    if score.shape[1] != NUM_PITCHES or audio.shape[1] != NUM_PITCHES:
        raise ValueError(
            f"both matrices need {NUM_PITCHES} pitch columns, "
            f"got {score.shape[1]} and {audio.shape[1]}"
        )

    C = _cost_matrix(score, audio)
    n, f = C.shape
    D = np.full((n, f), np.inf)
    D[0, 0] = C[0, 0]
    for d in range(1, n + f - 1):
        i = np.arange(max(0, d - f + 1), min(n - 1, d) + 1)
        j = d - i
        best = np.full(len(i), np.inf)
        both = (i > 0) & (j > 0)
        if both.any():
            best[both] = D[i[both] - 1, j[both] - 1]
        left = j > 0
        if left.any():
            best[left] = np.minimum(best[left], D[i[left], j[left] - 1])
        up = i > 0
        if up.any():
            best[up] = np.minimum(best[up], D[i[up] - 1, j[up]])
        D[i, j] = C[i, j] + best

    # Backtrace; candidate order encodes the tie-break (diagonal, then
    # audio advance, then score advance).
    path = [(n - 1, f - 1)]
    i, j = n - 1, f - 1
    while (i, j) != (0, 0):
        candidates = (
            D[i - 1, j - 1] if i > 0 and j > 0 else np.inf,
            D[i, j - 1] if j > 0 else np.inf,
            D[i - 1, j] if i > 0 else np.inf,
        )
        step = min(range(3), key=lambda s: candidates[s])
        if step == 0:
            i, j = i - 1, j - 1
        elif step == 1:
            j -= 1
        else:
            i -= 1
        path.append((i, j))
    path.reverse()
    return DtwResult(np.array(path, dtype=int), float(D[n - 1, f - 1]))


def frame_positions(path: np.ndarray) -> np.ndarray:
    """Measure position per audio frame: mean matched score row over 48.

    Path monotonicity makes this nondecreasing frame to frame.
    """
    path = np.asarray(path, dtype=int)
    frames = int(path[-1, 1]) + 1
    row_sum = np.zeros(frames)
    row_count = np.zeros(frames)
    np.add.at(row_sum, path[:, 1], path[:, 0])
    np.add.at(row_count, path[:, 1], 1)
    return row_sum / row_count / ROWS_PER_MEASURE


def path_to_alignment(
    path: np.ndarray,
    num_measures: int,
    frame_rate: float = FRAME_RATE_HZ,
    duration: float | None = None,
) -> Alignment:
    """Convert a warp path into a 100 Hz measure-aware alignment.

    Each audio frame's position is the mean of the score rows matched to
    it, in measure units (48 rows per measure). Path monotonicity makes
    the per-frame sequence nondecreasing. Frames sit at times
    ``a / frame_rate``; the alignment samples interpolate between them
    and hold the last frame's value to the end of the audio.

    Args:
        path: (L, 2) array of (score_row, audio_row) pairs.
        num_measures: M, the logical measure count (48*M score rows).
        frame_rate: audio frame rate in Hz.
        duration: audio length in seconds; defaults to frames/frame_rate.
    """
    path = np.asarray(path, dtype=int)
    if path.ndim != 2 or path.shape[1] != 2 or len(path) == 0:
        raise ValueError("path must be a non-empty (L, 2) array")
    if tuple(path[0]) != (0, 0):
        raise ValueError("path must start at (0, 0)")
    if path[-1, 0] != ROWS_PER_MEASURE * num_measures - 1:
        raise ValueError(
            f"path must end at score row {ROWS_PER_MEASURE * num_measures - 1}, "
            f"got {path[-1, 0]}"
        )

    frames = int(path[-1, 1]) + 1
    frame_m = frame_positions(path)

    if duration is None:
        duration = frames / frame_rate
    frame_times = np.arange(frames) / frame_rate
    times = np.arange(n_samples(duration)) / SAMPLE_RATE_HZ
    samples = np.interp(times, frame_times, frame_m)
    return Alignment(duration=duration, num_measures=num_measures, samples=samples)
