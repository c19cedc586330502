"""Core domain types for measure-aware audio-to-score alignment.

A score is a sequence of page images. Measures are axis-aligned boxes in
page-normalized coordinates, listed once each in reading order (the
*physical* order). Playback may revisit measures; the *logical* order is
the sequence of physical measure indices as performed, with every repeat
or jump expanded, so a position in the piece is a single fractional
measure index ``m in [0, M)``. The integer part of ``m`` selects a
measure box, the fractional part is the horizontal offset within it,
relative to the box width.

An :class:`Alignment` maps audio time to ``m`` by storing samples on a
100 Hz grid with piecewise-linear interpolation in between. Ground truth
comes as one timestamp per logical measure plus the total duration;
:func:`ground_truth_alignment` interpolates those linearly.

All types are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

SAMPLE_RATE_HZ = 100


def n_samples(duration: float) -> int:
    """Number of 100 Hz sample slots covering ``[0, duration)``."""
    return int(math.ceil(duration * SAMPLE_RATE_HZ))


@dataclass(frozen=True)
class BoundingBox:
    """A measure box in page-normalized coordinates.

    ``y``/``h`` are offset and height relative to the page height,
    ``x``/``w`` offset and width relative to the page width. The box must
    lie inside the page: ``y + h <= 1`` and ``x + w <= 1``.
    """

    page: int
    y: float
    h: float
    x: float
    w: float

    def __post_init__(self) -> None:
        if self.page < 0:
            raise ValueError(f"page must be >= 0, got {self.page}")
        if not 0.0 <= self.y <= 1.0:
            raise ValueError(f"y must be in [0, 1], got {self.y}")
        if not 0.0 < self.h <= 1.0:
            raise ValueError(f"h must be in (0, 1], got {self.h}")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must be in [0, 1], got {self.x}")
        if not 0.0 < self.w <= 1.0:
            raise ValueError(f"w must be in (0, 1], got {self.w}")
        if self.y + self.h > 1.0 + 1e-12:
            raise ValueError(f"box exceeds page bottom: y={self.y} h={self.h}")
        if self.x + self.w > 1.0 + 1e-12:
            raise ValueError(f"box exceeds page right edge: x={self.x} w={self.w}")

    @property
    def midpoint(self) -> tuple[float, float]:
        """(x, y) of the box center, page-normalized."""
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    def to_pixels(self, page_width: int, page_height: int) -> tuple[float, float, float, float]:
        """Return (x, y, w, h) in pixels for the given page size."""
        return (
            self.x * page_width,
            self.y * page_height,
            self.w * page_width,
            self.h * page_height,
        )

    @classmethod
    def from_pixels(
        cls,
        page: int,
        x: float,
        y: float,
        w: float,
        h: float,
        page_width: int,
        page_height: int,
    ) -> "BoundingBox":
        return cls(page=page, y=y / page_height, h=h / page_height, x=x / page_width, w=w / page_width)


@dataclass(frozen=True)
class PhysicalScore:
    """The pre-unroll measure list: every measure once, in reading order.

    ``page_pixel_dims`` holds one (width, height) pair per page and is
    only consumed by pixel<->normalized conversions at I/O boundaries.
    """

    page_count: int
    page_pixel_dims: tuple[tuple[int, int], ...]
    boxes: tuple[BoundingBox, ...]

    def __post_init__(self) -> None:
        if self.page_count < 1:
            raise ValueError("page_count must be >= 1")
        if len(self.page_pixel_dims) != self.page_count:
            raise ValueError(
                f"need one pixel dimension pair per page: "
                f"{len(self.page_pixel_dims)} pairs for {self.page_count} pages"
            )
        if not self.boxes:
            raise ValueError("a score needs at least one measure box")
        for i, box in enumerate(self.boxes):
            if box.page >= self.page_count:
                raise ValueError(f"box {i} is on page {box.page}, score has {self.page_count} pages")

    @property
    def measure_count(self) -> int:
        return len(self.boxes)


@dataclass(frozen=True)
class JumpLabel:
    """One annotated jump: after playing measure ``from_index``, continue
    at measure ``to_index``. ``order`` is the position in the annotation
    sequence, which is also the order in which jumps fire."""

    from_index: int
    to_index: int
    order: int

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")

    def __str__(self) -> str:
        return f"jump #{self.order} ({self.from_index} -> {self.to_index})"


@dataclass(frozen=True)
class LogicalOrder:
    """Measure sequence as performed: physical indices with jumps expanded."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("logical order must contain at least one measure")
        if any(e < 0 for e in self.entries):
            raise ValueError("logical order entries must be physical indices >= 0")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def num_measures(self) -> int:
        return len(self.entries)

    def resolve(self, boxes: Sequence[BoundingBox]) -> tuple[BoundingBox, ...]:
        """Box list in logical order (repeated measures repeat their box)."""
        return tuple(boxes[p] for p in self.entries)


class ScorePlayhead(NamedTuple):
    """A position marker on a page: vertical band plus horizontal offset,
    all page-normalized."""

    page: int
    y: float
    h: float
    x: float


def playhead_from_measure(
    m: float, order: LogicalOrder, boxes: Sequence[BoundingBox]
) -> ScorePlayhead:
    """Convert a fractional measure index into a score playhead.

    The integer part of ``m`` picks the logical measure; its box supplies
    page, y and h, and the fractional part offsets x across the box width.

    Raises:
        ValueError: if ``m`` is outside ``[0, M)``.
    """
    M = order.num_measures
    if not 0.0 <= m < M:
        raise ValueError(f"measure position {m} outside [0, {M})")
    k = int(math.floor(m))
    box = boxes[order.entries[k]]
    return ScorePlayhead(box.page, box.y, box.h, box.x + box.w * (m - k))


@dataclass(frozen=True)
class Alignment:
    """Monotone map from audio time to fractional measure index.

    Stored as samples on the 100 Hz grid ``i / 100`` for
    ``i = 0 .. ceil(100 * duration) - 1``, piecewise-linear in between
    and held constant past the last sample.
    """

    duration: float
    num_measures: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        if not self.duration > 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.num_measures < 1:
            raise ValueError("num_measures must be >= 1")
        arr = np.array(self.samples, dtype=float, copy=True)
        expected = n_samples(self.duration)
        if arr.ndim != 1 or len(arr) != expected:
            raise ValueError(
                f"expected {expected} samples at {SAMPLE_RATE_HZ} Hz for duration "
                f"{self.duration}, got shape {arr.shape}"
            )
        if np.any(np.diff(arr) < 0):
            raise ValueError("alignment samples must be monotone nondecreasing")
        if arr[0] < 0 or arr[-1] >= self.num_measures:
            raise ValueError(f"alignment samples must lie in [0, {self.num_measures})")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def sample_times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / SAMPLE_RATE_HZ

    def at(self, t):
        """Fractional measure index at time(s) ``t`` (scalar or array)."""
        return np.interp(t, self.sample_times, self.samples)


@dataclass(frozen=True)
class GroundTruth:
    """Reference alignment: logical-order boxes plus one onset timestamp
    per logical measure and the total audio duration."""

    order: LogicalOrder
    boxes: tuple[BoundingBox, ...]
    onsets: np.ndarray
    duration: float

    def __post_init__(self) -> None:
        onsets = np.array(self.onsets, dtype=float, copy=True)
        M = self.order.num_measures
        if len(self.boxes) != M:
            raise ValueError(f"{len(self.boxes)} boxes for {M} logical measures")
        if onsets.ndim != 1 or len(onsets) != M:
            raise ValueError(f"need one onset per logical measure ({M}), got {onsets.shape}")
        if onsets[0] < 0:
            raise ValueError("first measure onset must be >= 0")
        if np.any(np.diff(onsets) <= 0):
            raise ValueError("measure onsets must be strictly increasing")
        if not self.duration > onsets[-1]:
            raise ValueError(
                f"duration {self.duration} must exceed the last onset {onsets[-1]}"
            )
        onsets.setflags(write=False)
        object.__setattr__(self, "onsets", onsets)

    @property
    def num_measures(self) -> int:
        return self.order.num_measures

    def at(self, t):
        """Fractional measure index at time(s) ``t``, interpolated linearly.

        Between consecutive onsets the index rises linearly by one measure;
        after the final onset it continues linearly so that it would reach
        ``M`` exactly at ``duration``, clamped strictly below ``M``. Before
        the first onset it is 0.
        """
        M = self.num_measures
        xs = np.concatenate([self.onsets, [self.duration]])
        ys = np.concatenate([np.arange(M, dtype=float), [float(M)]])
        return np.minimum(np.interp(t, xs, ys), np.nextafter(float(M), 0.0))


def ground_truth_alignment(gt: GroundTruth, t: float) -> float:
    """Ground-truth measure position at time ``t``.

    Raises:
        ValueError: if ``t`` is outside ``[0, duration)``.
    """
    if not 0.0 <= t < gt.duration:
        raise ValueError(f"time {t} outside [0, {gt.duration})")
    return float(gt.at(t))
