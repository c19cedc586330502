"""Piano-roll feature matrices for score and audio.

Both sides of the alignment are matrices with 88 columns, one per MIDI
pitch from A0 (21) to C8 (108).

Score side: each logical measure contributes a binary 48 x 88 block. A
notehead at horizontal fraction ``x_rel`` of its measure and staff
position ``staff_pos`` sets row ``floor(48 * x_rel)`` of the block and
the column of its converted pitch. 48 rows per measure gives enough
horizontal resolution for common rhythmic patterns. Blocks are
concatenated in logical order, so a repeated measure repeats its block.

Audio side: frames at 31 Hz with values in [0, 1], typically onset
probabilities from a note transcription model. Thresholded and
MIDI-derived variants are available for comparison.

Staff positions count lines and spaces from the bottom line of a staff
(bottom line = 0, +1 per step upward, negative below). Without clef/key
metadata the conversion assumes treble+bass when a measure has exactly
two staves, treble otherwise, and C major throughout; these defaults are
wrong often enough in real scores, but alignment is globally optimal and
tolerates them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import LogicalOrder

FRAME_RATE_HZ = 31
ROWS_PER_MEASURE = 48
NUM_PITCHES = 88
PITCH_MIN = 21  # A0
PITCH_MAX = 108  # C8

TREBLE = "treble"
BASS = "bass"

AUDIO_VARIANTS = ("onset_prob", "onset_pred", "frame_prob", "frame_pred", "midi")

# Diatonic step numbers counted from C0 (C0=0, D0=1, ... B0=6, C1=7, ...).
# Staff position 0 sits on the bottom staff line: E4 in treble, G2 in bass.
_CLEF_ANCHORS = {TREBLE: 4 * 7 + 2, BASS: 2 * 7 + 4}
_LETTER_SEMITONES = (0, 2, 4, 5, 7, 9, 11)  # C D E F G A B
_LETTERS = "CDEFGAB"
_SHARP_ORDER = "FCGDAEB"
_FLAT_ORDER = "BEADGCF"


class PitchRangeError(ValueError):
    """Converted pitch falls outside the piano range [21, 108]."""


def staff_pos_to_midi(clef: str, staff_pos: int, key_signature: int = 0) -> int:
    """Convert a staff position to a MIDI pitch.

    Walks the C-major scale ``staff_pos`` steps from the clef anchor
    (treble bottom line = E4, bass bottom line = G2), then applies the
    key signature: with k sharps the first k letters of F C G D A E B are
    raised a semitone, with k flats the first k of B E A D G C F lowered.

    Raises:
        PitchRangeError: if the pitch lands outside the piano range;
            callers building matrices drop such events with a warning.
    """
    if clef not in _CLEF_ANCHORS:
        raise ValueError(f"unknown clef {clef!r}; expected one of {sorted(_CLEF_ANCHORS)}")
    if abs(key_signature) > 7:
        raise ValueError(f"key signature must be in [-7, 7], got {key_signature}")
    diatonic = _CLEF_ANCHORS[clef] + staff_pos
    octave, letter_idx = divmod(diatonic, 7)
    pitch = 12 * (octave + 1) + _LETTER_SEMITONES[letter_idx]
    letter = _LETTERS[letter_idx]
    if key_signature > 0 and letter in _SHARP_ORDER[:key_signature]:
        pitch += 1
    elif key_signature < 0 and letter in _FLAT_ORDER[:-key_signature]:
        pitch -= 1
    if not PITCH_MIN <= pitch <= PITCH_MAX:
        raise PitchRangeError(
            f"staff position {staff_pos} in {clef} clef (key {key_signature:+d}) "
            f"maps to MIDI {pitch}, outside [{PITCH_MIN}, {PITCH_MAX}]"
        )
    return pitch


@dataclass(frozen=True)
class NoteheadEvent:
    """A detected notehead: which physical measure and staff it sits on,
    its discrete staff position, and its horizontal fraction of the
    measure width in [0, 1)."""

    measure_index: int
    staff_index: int
    staff_pos: int
    x_rel: float

    def __post_init__(self) -> None:
        if self.measure_index < 0:
            raise ValueError(f"measure_index must be >= 0, got {self.measure_index}")
        if self.staff_index < 0:
            raise ValueError(f"staff_index must be >= 0, got {self.staff_index}")
        if not 0.0 <= self.x_rel < 1.0:
            raise ValueError(f"x_rel must be in [0, 1), got {self.x_rel}")


@dataclass(frozen=True)
class StaffMetadata:
    """Optional per-measure clef and key-signature annotations.

    ``clefs[p]`` lists the clef of each staff of physical measure ``p``
    (top staff first); ``keys[p]`` is the number of sharps (positive) or
    flats (negative) in effect there.
    """

    clefs: tuple[tuple[str, ...], ...]
    keys: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.clefs) != len(self.keys):
            raise ValueError("clefs and keys must cover the same number of measures")
        for p, staff_clefs in enumerate(self.clefs):
            for clef in staff_clefs:
                if clef not in (TREBLE, BASS):
                    raise ValueError(f"measure {p}: unknown clef {clef!r}")
        for p, key in enumerate(self.keys):
            if abs(key) > 7:
                raise ValueError(f"measure {p}: key signature {key} outside [-7, 7]")


def _default_clef(staff_index: int, staves: int) -> str:
    # Two staves is read as a grand staff; anything else defaults to treble.
    if staves == 2 and staff_index == 1:
        return BASS
    return TREBLE


def build_score_matrix(
    events: Sequence[NoteheadEvent],
    order: LogicalOrder,
    staves_per_measure: Sequence[int],
    metadata: StaffMetadata | None = None,
) -> np.ndarray:
    """Rasterize notehead events into the binary (48*M) x 88 score matrix.

    Each logical measure slot k with physical index p stamps a 1 at row
    ``48*k + floor(48 * x_rel)`` and the column of the event's converted
    pitch, for every event in measure p. Clef and key come from
    ``metadata`` when given, else from the staff-count defaults and C
    major. Events whose pitch falls off the piano are dropped, not
    clamped, and the total drop count is reported as a warning.
    """
    M = order.num_measures
    matrix = np.zeros((ROWS_PER_MEASURE * M, NUM_PITCHES), dtype=float)

    # Cells are resolved once per physical measure, then stamped into every
    # logical slot that plays it, so repeated measures get identical blocks.
    by_measure: dict[int, list[NoteheadEvent]] = {}
    for event in events:
        by_measure.setdefault(event.measure_index, []).append(event)

    dropped = 0
    cells: dict[int, list[tuple[int, int]]] = {}
    for p, measure_events in by_measure.items():
        staves = staves_per_measure[p] if p < len(staves_per_measure) else 1
        resolved: list[tuple[int, int]] = []
        for event in measure_events:
            if metadata is not None and p < len(metadata.clefs):
                staff_clefs = metadata.clefs[p]
                clef = (
                    staff_clefs[event.staff_index]
                    if event.staff_index < len(staff_clefs)
                    else TREBLE
                )
                key = metadata.keys[p]
            else:
                clef = _default_clef(event.staff_index, staves)
                key = 0
            try:
                pitch = staff_pos_to_midi(clef, event.staff_pos, key)
            except PitchRangeError:
                dropped += 1
                continue
            row_in_measure = int(event.x_rel * ROWS_PER_MEASURE)
            resolved.append((row_in_measure, pitch - PITCH_MIN))
        cells[p] = resolved

    for k, p in enumerate(order.entries):
        base = ROWS_PER_MEASURE * k
        for row_in_measure, col in cells.get(p, ()):
            matrix[base + row_in_measure, col] = 1.0

    if dropped:
        warnings.warn(
            f"dropped {dropped} notehead event(s) whose pitch fell outside "
            f"the piano range [{PITCH_MIN}, {PITCH_MAX}]",
            stacklevel=2,
        )
    return matrix


@dataclass(frozen=True)
class TranscriptionBundle:
    """Raw transcription outputs an audio representation can be built from.

    ``onset_prob`` and ``frame_prob`` are frames x 88 matrices in [0, 1]
    at 31 Hz. ``notes`` are (onset_sec, offset_sec, midi_pitch) triples.
    ``duration`` is the audio length in seconds, used to size the frame
    grid for the midi variant (defaults to the last note offset).
    """

    onset_prob: np.ndarray | None = None
    frame_prob: np.ndarray | None = None
    notes: tuple[tuple[float, float, int], ...] | None = None
    duration: float | None = None


def _validate_probability_matrix(matrix: np.ndarray, name: str) -> np.ndarray:
    arr = np.asarray(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != NUM_PITCHES:
        raise ValueError(f"{name} must be a frames x {NUM_PITCHES} matrix, got shape {arr.shape}")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise ValueError(f"{name} values must lie in [0, 1]")
    return arr


def _rasterize_notes(
    notes: Sequence[tuple[float, float, int]], duration: float | None
) -> np.ndarray:
    if duration is None:
        duration = max((off for _, off, _ in notes), default=0.0)
    frames = int(math.ceil(duration * FRAME_RATE_HZ))
    matrix = np.zeros((frames, NUM_PITCHES), dtype=float)
    if frames == 0:
        return matrix
    centers = (np.arange(frames) + 0.5) / FRAME_RATE_HZ
    for onset, offset, pitch in notes:
        if not PITCH_MIN <= pitch <= PITCH_MAX:
            raise ValueError(f"note pitch {pitch} outside [{PITCH_MIN}, {PITCH_MAX}]")
        if offset < onset:
            raise ValueError(f"note offset {offset} precedes onset {onset}")
        active = (centers >= onset) & (centers < offset)
        matrix[active, pitch - PITCH_MIN] = 1.0
    return matrix


def audio_representation(
    bundle: TranscriptionBundle, variant: str = "onset_prob", threshold: float = 0.5
) -> np.ndarray:
    """Build the frames x 88 audio matrix for one representation variant.

    ``onset_prob``/``frame_prob`` pass the stored probabilities through
    unchanged. ``onset_pred``/``frame_pred`` binarize them (1 where the
    value is >= ``threshold``). ``midi`` rasterizes note events to the
    31 Hz grid, marking frames whose center lies in [onset, offset).

    Raises:
        ValueError: if the bundle lacks what the variant needs, or the
            variant name is unknown.
    """
    if variant not in AUDIO_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {AUDIO_VARIANTS}")

    if variant in ("onset_prob", "onset_pred"):
        if bundle.onset_prob is None:
            raise ValueError(f"variant {variant!r} needs onset probabilities in the bundle")
        probs = _validate_probability_matrix(bundle.onset_prob, "onset_prob")
    elif variant in ("frame_prob", "frame_pred"):
        if bundle.frame_prob is None:
            raise ValueError(f"variant {variant!r} needs frame probabilities in the bundle")
        probs = _validate_probability_matrix(bundle.frame_prob, "frame_prob")
    else:
        if bundle.notes is None:
            raise ValueError("variant 'midi' needs note events in the bundle")
        return _rasterize_notes(bundle.notes, bundle.duration)

    if variant.endswith("_pred"):
        return (probs >= threshold).astype(float)
    return probs.copy()
