"""Measure-aware audio-to-score alignment.

Aligns performance audio to sheet-music page images at the level of
fractional measure indices: human-labeled jumps are unrolled into the
played measure order, score and audio become piano-roll feature
matrices, dynamic time warping matches them, and measure-aware metrics
score the result against ground truth.
"""

from .align import DtwResult, dtw, frame_positions, path_to_alignment
from .features import (
    AUDIO_VARIANTS,
    FRAME_RATE_HZ,
    NUM_PITCHES,
    PITCH_MAX,
    PITCH_MIN,
    ROWS_PER_MEASURE,
    NoteheadEvent,
    PitchRangeError,
    StaffMetadata,
    TranscriptionBundle,
    audio_representation,
    build_score_matrix,
    staff_pos_to_midi,
)
from .metrics import MeasureMetrics, mdiff, metrics, reindex
from .model import (
    SAMPLE_RATE_HZ,
    Alignment,
    BoundingBox,
    GroundTruth,
    JumpLabel,
    LogicalOrder,
    PhysicalScore,
    ScorePlayhead,
    ground_truth_alignment,
    n_samples,
    playhead_from_measure,
)
from .unroll import JumpViolation, UnreachableJumpError, unroll, validate_jumps

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "AUDIO_VARIANTS",
    "BoundingBox",
    "DtwResult",
    "FRAME_RATE_HZ",
    "GroundTruth",
    "JumpLabel",
    "JumpViolation",
    "LogicalOrder",
    "MeasureMetrics",
    "NoteheadEvent",
    "NUM_PITCHES",
    "PhysicalScore",
    "PITCH_MAX",
    "PITCH_MIN",
    "PitchRangeError",
    "ROWS_PER_MEASURE",
    "SAMPLE_RATE_HZ",
    "ScorePlayhead",
    "StaffMetadata",
    "TranscriptionBundle",
    "UnreachableJumpError",
    "audio_representation",
    "build_score_matrix",
    "dtw",
    "frame_positions",
    "ground_truth_alignment",
    "mdiff",
    "metrics",
    "n_samples",
    "path_to_alignment",
    "playhead_from_measure",
    "reindex",
    "staff_pos_to_midi",
    "unroll",
    "validate_jumps",
]
