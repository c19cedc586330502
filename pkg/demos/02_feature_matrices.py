"""Building the piano-roll feature matrices for both sides of the alignment.

Score side: binary, 48 rows per logical measure x 88 pitches, built from
detected noteheads (staff position + horizontal fraction of the measure).
Audio side: [0,1]-valued frames at 31 Hz, typically onset probabilities
from a transcription model; thresholded and MIDI-derived variants exist
for comparison.
"""

import numpy as np

from scorealign import (
    LogicalOrder,
    NoteheadEvent,
    StaffMetadata,
    TranscriptionBundle,
    audio_representation,
    build_score_matrix,
    staff_pos_to_midi,
    unroll,
)

# Staff positions count lines and spaces from the bottom staff line.
# Bottom line of a treble staff is E4, of a bass staff G2.
for clef, pos in [("treble", 0), ("treble", 7), ("bass", 0)]:
    print(f"{clef} staff_pos {pos:2d} -> MIDI {staff_pos_to_midi(clef, pos)}")
# Key signatures shift the affected letters: F becomes F# with one sharp.
print("treble staff_pos 1 in G major ->", staff_pos_to_midi("treble", 1, key_signature=1))

# A tiny two-measure piece, one staff, four noteheads.
events = [
    NoteheadEvent(measure_index=0, staff_index=0, staff_pos=0, x_rel=0.0),   # E4
    NoteheadEvent(measure_index=0, staff_index=0, staff_pos=1, x_rel=0.5),   # F4
    NoteheadEvent(measure_index=1, staff_index=0, staff_pos=4, x_rel=0.0),   # B4
    NoteheadEvent(measure_index=1, staff_index=0, staff_pos=8, x_rel=0.25),  # F5
]
order = unroll(2, [])
score = build_score_matrix(events, order, staves_per_measure=[1, 1])
print("\nscore matrix:", score.shape, "ones at:")
for row, col in zip(*np.nonzero(score)):
    print(f"  row {row:3d} (measure {row // 48}, slot {row % 48}), MIDI {col + 21}")

# The same physical measures with a repeat double the matrix: the block
# for a repeated measure is stamped again at its second logical slot.
repeated = build_score_matrix(events, LogicalOrder((0, 1, 0, 1)), [1, 1])
print("with repeat:", repeated.shape, "- block equality:",
      bool((repeated[:96] == repeated[96:]).all()))

# Ground-truth clefs/keys can be supplied when available; defaults are
# treble(+bass for two staves) and C major otherwise.
meta = StaffMetadata(clefs=(("treble",), ("treble",)), keys=(1, 1))
with_meta = build_score_matrix(events, order, [1, 1], meta)
print("G-major metadata moves", int((score != with_meta).sum() // 2), "noteheads")

# Audio representations from one transcription bundle.
rng = np.random.default_rng(0)
bundle = TranscriptionBundle(
    onset_prob=rng.random((31 * 2, 88)) * 0.9,
    frame_prob=rng.random((31 * 2, 88)),
    notes=((0.0, 0.4, 60), (0.5, 1.1, 64), (1.2, 1.9, 67)),
    duration=2.0,
)
for variant in ("onset_prob", "onset_pred", "frame_prob", "frame_pred", "midi"):
    matrix = audio_representation(bundle, variant, threshold=0.5)
    print(f"{variant:10s} shape {matrix.shape}  mean {matrix.mean():.3f}")
