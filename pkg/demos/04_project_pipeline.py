"""The on-disk project pipeline: the same steps the CLI and the HTTP
service run, exercised directly.

Builds a throwaway project directory (measure boxes, jump labels,
noteheads, an onset-probability matrix, ground truth), then unrolls,
aligns, and evaluates it. Equivalent shell session:

    scorealign unroll --project demo_project
    scorealign align  --project demo_project --variant onset_prob
    scorealign eval   --project demo_project
    scorealign serve  --project .            # HTTP API for the labeling UI
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from scorealign import FRAME_RATE_HZ, JumpLabel, NoteheadEvent, build_score_matrix, unroll
from scorealign.project import (
    Project,
    run_align,
    run_eval,
    run_unroll,
    write_jltr,
    write_json,
)

root = Path(tempfile.mkdtemp()) / "demo_project"
root.mkdir()
print("project at", root)

# Four measures in a row on one page, repeat sign at the end.
write_json(
    root / "measures.json",
    [{"page": 0, "x": i / 4, "y": 0.1, "w": 0.22, "h": 0.3} for i in range(4)],
)
write_json(root / "jumps.json", [{"from": 3, "to": 0}])

# One notehead chord pattern per measure.
rng = np.random.default_rng(3)
noteheads = [
    {"measure": p, "staff": 0, "staff_pos": int(rng.integers(-2, 12)), "x_rel": float(x)}
    for p in range(4)
    for x in np.linspace(0, 0.9, 8)
]
write_json(root / "noteheads.json", noteheads)

# Fake a transcription: the performance follows the unrolled score at a
# steady 48 score rows per 48 audio frames (one frame per row).
order = unroll(4, [JumpLabel(3, 0, 0)])
events = [
    NoteheadEvent(d["measure"], d["staff"], d["staff_pos"], d["x_rel"])
    for d in noteheads
]
score = build_score_matrix(events, order, [1] * 4)
write_jltr(root / "onsets.jltr", score)

duration = score.shape[0] / FRAME_RATE_HZ
write_json(
    root / "gt.json",
    {
        "duration": duration,
        "logical_order": list(order.entries),
        "measure_onsets": [48 * k / FRAME_RATE_HZ for k in range(order.num_measures)],
    },
)

project = Project(root)
print("unroll ->", list(run_unroll(project).entries))
record = run_align(project)
print(
    f"align  -> {record.alignment.num_measures} measures over "
    f"{record.alignment.duration:.2f} s, provenance variant={record.provenance['variant']}"
)
result = run_eval(project)
print(f"eval   -> MAcc {result.macc:.3f}  MErr {result.merr:.3f}  MDev {result.mdev:.3f}")

print("\nfiles written:")
for name in ("logical_order.json", "alignment.json", "eval.json"):
    payload = json.loads((root / name).read_text())
    size = (root / name).stat().st_size
    kind = type(payload).__name__
    print(f"  {name:20s} {size:7d} bytes ({kind})")
