"""Measure-aware evaluation of an estimated alignment against ground truth.

The estimated and reference alignments may be built over different box
lists (different measure detections, or a score that was unrolled
differently). Evaluation therefore first matches every estimated logical
box to a reference logical box by midpoint distance (the *reindex*
step) so that errors are expressed in reference measure units. For scores
with repeats the same physical box appears several times in the
reference order; distance alone cannot separate those copies, so ties
(within 1e-9) are broken monotonically: each estimated box takes the
smallest candidate index not below its predecessor's assignment.

With ``reindex(m) = matching[floor(m)] + frac(m)``, the signed error at
time t is

    mdiff(t) = reindex(g_est(t)) - g_ref(t)

and the summary metrics sample it at t = T*i/N for N = ceil(100*T):

    measure accuracy  = fraction of samples with |mdiff| <= 1/2,
    measure error     = mean |mdiff|,
    measure deviation = rms mdiff (root of the mean squared difference,
                        no mean subtraction).
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .model import Alignment, BoundingBox, GroundTruth, n_samples

TIE_TOLERANCE = 1e-9


class MeasureMetrics(NamedTuple):
    macc: float
    merr: float
    mdev: float


def _midpoints(boxes: Sequence[BoundingBox]) -> np.ndarray:
    return np.array([box.midpoint for box in boxes], dtype=float)


def reindex(
    est_boxes: Sequence[BoundingBox], gt_boxes: Sequence[BoundingBox]
) -> np.ndarray:
    """Match estimated logical boxes to ground-truth logical boxes.

    Candidates for an estimated box are the ground-truth boxes on the
    same page whose midpoint attains the minimum Euclidean distance
    (within ``TIE_TOLERANCE``); if the page has no ground-truth boxes at
    all, every box competes with the page index added to its midpoint y
    so pages stack vertically. Among tied candidates the smallest index
    not below the previous assignment wins, falling back to the smallest
    candidate.

    Returns:
        int array of length len(est_boxes): ground-truth index per
        estimated index, total and monotone over ties.
    """
    if not est_boxes or not gt_boxes:
        raise ValueError("reindex needs non-empty box lists on both sides")
    est_mid = _midpoints(est_boxes)
    gt_mid = _midpoints(gt_boxes)
    est_pages = np.array([box.page for box in est_boxes])
    gt_pages = np.array([box.page for box in gt_boxes])

    matching = np.zeros(len(est_boxes), dtype=int)
    previous = 0
    for k, box in enumerate(est_boxes):
        same_page = gt_pages == est_pages[k]
        if same_page.any():
            dist = np.where(
                same_page,
                np.hypot(gt_mid[:, 0] - est_mid[k, 0], gt_mid[:, 1] - est_mid[k, 1]),
                np.inf,
            )
        else:
            dist = np.hypot(
                gt_mid[:, 0] - est_mid[k, 0],
                (gt_pages + gt_mid[:, 1]) - (est_pages[k] + est_mid[k, 1]),
            )
        candidates = np.flatnonzero(dist <= dist.min() + TIE_TOLERANCE)
        at_or_after = candidates[candidates >= previous]
        chosen = int(at_or_after[0]) if len(at_or_after) else int(candidates[0])
        matching[k] = chosen
        previous = chosen
    return matching


def _reindex_positions(m: np.ndarray, matching: np.ndarray) -> np.ndarray:
    whole = np.floor(m).astype(int)
    return matching[whole] + (m - whole)


def mdiff(
    t: float,
    estimate: Alignment,
    est_boxes: Sequence[BoundingBox],
    gt: GroundTruth,
) -> float:
    """Signed measure difference at time ``t``, in ground-truth units.

    Raises:
        ValueError: if ``t`` is outside ``[0, duration)``.
    """
    if not 0.0 <= t < gt.duration:
        raise ValueError(f"time {t} outside [0, {gt.duration})")
    matching = reindex(est_boxes, gt.boxes)
    m_est = np.asarray(estimate.at(t), dtype=float)
    return float(_reindex_positions(m_est, matching) - gt.at(t))


def metrics(
    estimate: Alignment,
    est_boxes: Sequence[BoundingBox],
    gt: GroundTruth,
) -> MeasureMetrics:
    """Measure accuracy, mean absolute error, and rms error of an alignment.

    Samples the measure difference at ``t = T*i/N`` for
    ``i = 0..N-1, N = ceil(100*T)``: one hundred comparisons per second,
    the same grid the alignment itself is stored on.
    """
    T = gt.duration
    N = n_samples(T)
    times = T * np.arange(N) / N
    matching = reindex(est_boxes, gt.boxes)
    diffs = _reindex_positions(np.asarray(estimate.at(times)), matching) - gt.at(times)
    macc = float(np.mean(np.abs(diffs) <= 0.5))
    merr = float(np.mean(np.abs(diffs)))
    mdev = float(math.sqrt(np.mean(np.square(diffs))))
    return MeasureMetrics(macc=macc, merr=merr, mdev=mdev)
