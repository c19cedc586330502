"""Project directories, on-disk formats, and the alignment pipeline.

A project is a directory with the measure detections, annotations, and
transcription outputs for one piece::

    pages/000.png, 001.png, ...   page images (optional)
    measures.json       [{"page", "x", "y", "w", "h"}, ...] physical reading order
    jumps.json          [{"from", "to"}, ...]; array position = annotation order
    noteheads.json      [{"measure", "staff", "staff_pos", "x_rel"}, ...]
    staff_meta.json     optional [{"clefs": [...], "key": int}, ...] per measure
    onsets.jltr         onset-probability matrix (binary format below)
    frames.jltr         optional frame-probability matrix
    notes.json          optional [{"onset", "offset", "pitch"}, ...] for midi features
    gt.json             {"duration", "logical_order", "measure_onsets"}
    logical_order.json  output of unroll: [physical index, ...]
    alignment.json      output of align
    eval.json           output of eval

``.jltr`` is a tiny binary container for feature matrices: magic "JLTR",
u16 format version (1), u32 frame rate numerator, u32 row count, u32
column count, then row-major IEEE-754 binary32 values, everything
little-endian.

All writers emit canonical bytes (two-space JSON indent, trailing
newline, no timestamps), so rerunning a command on unchanged inputs
reproduces its outputs byte for byte. Alignment provenance records input
digests instead of wall-clock times for the same reason.
"""

from __future__ import annotations

import hashlib
import json
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .align import dtw, path_to_alignment
from .features import (
    FRAME_RATE_HZ,
    NUM_PITCHES,
    NoteheadEvent,
    StaffMetadata,
    TranscriptionBundle,
    audio_representation,
)
from .metrics import MeasureMetrics, metrics
from .model import (
    Alignment,
    BoundingBox,
    GroundTruth,
    JumpLabel,
    LogicalOrder,
    PhysicalScore,
    ScorePlayhead,
    playhead_from_measure,
)
from .unroll import JumpViolation, unroll, validate_jumps

JLTR_MAGIC = b"JLTR"
JLTR_VERSION = 1
_JLTR_HEADER = struct.Struct("<4sHIII")

DEFAULT_PAGE_DIMS = (1000, 1000)


class JumpValidationError(Exception):
    """Raised when a jump list fails validation; carries the report."""

    def __init__(self, violations: Sequence[JumpViolation]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in violations))


# ---------------------------------------------------------------------------
# canonical JSON and the individual formats


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


def write_json(path: Path, obj) -> None:
    path.write_bytes(canonical_json_bytes(obj))


def read_json(path: Path):
    if not path.exists():
        raise FileNotFoundError(f"missing file: {path}")
    return json.loads(path.read_text(encoding="utf-8"))


def boxes_to_json(boxes: Sequence[BoundingBox]) -> list[dict]:
    return [
        {"page": b.page, "x": b.x, "y": b.y, "w": b.w, "h": b.h} for b in boxes
    ]


def boxes_from_json(data) -> list[BoundingBox]:
    return [
        BoundingBox(page=d["page"], y=d["y"], h=d["h"], x=d["x"], w=d["w"]) for d in data
    ]


def jumps_to_json(jumps: Sequence[JumpLabel]) -> list[dict]:
    ordered = sorted(jumps, key=lambda j: j.order)
    return [{"from": j.from_index, "to": j.to_index} for j in ordered]


def jumps_from_json(data) -> list[JumpLabel]:
    return [
        JumpLabel(from_index=d["from"], to_index=d["to"], order=i)
        for i, d in enumerate(data)
    ]


def noteheads_to_json(events: Sequence[NoteheadEvent]) -> list[dict]:
    return [
        {
            "measure": e.measure_index,
            "staff": e.staff_index,
            "staff_pos": e.staff_pos,
            "x_rel": e.x_rel,
        }
        for e in events
    ]


def noteheads_from_json(data) -> list[NoteheadEvent]:
    return [
        NoteheadEvent(
            measure_index=d["measure"],
            staff_index=d["staff"],
            staff_pos=d["staff_pos"],
            x_rel=d["x_rel"],
        )
        for d in data
    ]


def staff_meta_to_json(meta: StaffMetadata) -> list[dict]:
    return [
        {"clefs": list(clefs), "key": key}
        for clefs, key in zip(meta.clefs, meta.keys)
    ]


def staff_meta_from_json(data) -> StaffMetadata:
    return StaffMetadata(
        clefs=tuple(tuple(d["clefs"]) for d in data),
        keys=tuple(d["key"] for d in data),
    )


def ground_truth_to_json(gt: GroundTruth) -> dict:
    return {
        "duration": gt.duration,
        "logical_order": list(gt.order.entries),
        "measure_onsets": [float(t) for t in gt.onsets],
    }


def ground_truth_from_json(data, measure_boxes: Sequence[BoundingBox]) -> GroundTruth:
    order = LogicalOrder(tuple(data["logical_order"]))
    return GroundTruth(
        order=order,
        boxes=order.resolve(measure_boxes),
        onsets=np.array(data["measure_onsets"], dtype=float),
        duration=float(data["duration"]),
    )


def write_jltr(path: Path, matrix: np.ndarray, frame_rate: int = FRAME_RATE_HZ) -> None:
    arr = np.ascontiguousarray(np.asarray(matrix), dtype="<f4")
    if arr.ndim != 2:
        raise ValueError(f"jltr stores 2-D matrices, got shape {arr.shape}")
    header = _JLTR_HEADER.pack(JLTR_MAGIC, JLTR_VERSION, frame_rate, arr.shape[0], arr.shape[1])
    path.write_bytes(header + arr.tobytes())


def read_jltr(path: Path) -> tuple[np.ndarray, int]:
    """Read a feature matrix; returns (float64 matrix, frame rate)."""
    if not path.exists():
        raise FileNotFoundError(f"missing file: {path}")
    blob = path.read_bytes()
    if len(blob) < _JLTR_HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, rate, rows, cols = _JLTR_HEADER.unpack_from(blob)
    if magic != JLTR_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != JLTR_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    expected = _JLTR_HEADER.size + rows * cols * 4
    if len(blob) != expected:
        raise ValueError(f"{path}: expected {expected} bytes, found {len(blob)}")
    matrix = np.frombuffer(blob, dtype="<f4", offset=_JLTR_HEADER.size).reshape(rows, cols)
    return matrix.astype(float), rate


# ---------------------------------------------------------------------------
# alignment record


@dataclass(frozen=True)
class AlignmentRecord:
    """An alignment plus its rendered playheads and input provenance."""

    alignment: Alignment
    playheads: tuple[ScorePlayhead, ...]
    provenance: dict


def alignment_record_to_json(record: AlignmentRecord) -> dict:
    a = record.alignment
    return {
        "duration": a.duration,
        "num_measures": a.num_measures,
        "sample_rate": 100,
        "samples": [float(v) for v in a.samples],
        "playheads": [
            {"page": p.page, "y": p.y, "h": p.h, "x": p.x} for p in record.playheads
        ],
        "provenance": record.provenance,
    }


def alignment_record_from_json(data) -> AlignmentRecord:
    alignment = Alignment(
        duration=float(data["duration"]),
        num_measures=int(data["num_measures"]),
        samples=np.array(data["samples"], dtype=float),
    )
    playheads = tuple(
        ScorePlayhead(page=p["page"], y=p["y"], h=p["h"], x=p["x"])
        for p in data["playheads"]
    )
    return AlignmentRecord(alignment, playheads, data.get("provenance", {}))


def _sha256(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# project directory


class Project:
    """Accessor for one project directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def path(self, name: str) -> Path:
        return self.root / name

    def require(self, name: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise FileNotFoundError(f"missing file: {p}")
        return p

    def page_image_path(self, page: int) -> Path:
        return self.root / "pages" / f"{page:03d}.png"

    def page_image_paths(self) -> list[Path]:
        pages_dir = self.root / "pages"
        if not pages_dir.is_dir():
            return []
        return sorted(pages_dir.glob("*.png"))

    # -- loaders -----------------------------------------------------------

    def measure_boxes(self) -> list[BoundingBox]:
        return boxes_from_json(read_json(self.require("measures.json")))

    def load_jumps(self) -> list[JumpLabel]:
        # A project without jumps.json simply has no jumps.
        p = self.path("jumps.json")
        if not p.exists():
            return []
        return jumps_from_json(read_json(p))

    def load_logical_order(self) -> LogicalOrder:
        return LogicalOrder(tuple(read_json(self.require("logical_order.json"))))

    def load_noteheads(self) -> list[NoteheadEvent]:
        return noteheads_from_json(read_json(self.require("noteheads.json")))

    def load_staff_meta(self) -> StaffMetadata | None:
        p = self.path("staff_meta.json")
        if not p.exists():
            return None
        meta = staff_meta_from_json(read_json(p))
        boxes = self.measure_boxes()
        if len(meta.clefs) != len(boxes):
            raise ValueError(
                f"staff_meta.json covers {len(meta.clefs)} measures, "
                f"measures.json has {len(boxes)}"
            )
        return meta

    def load_ground_truth(self) -> GroundTruth:
        return ground_truth_from_json(
            read_json(self.require("gt.json")), self.measure_boxes()
        )

    def load_alignment(self) -> AlignmentRecord:
        return alignment_record_from_json(read_json(self.require("alignment.json")))

    def load_physical_score(self) -> PhysicalScore:
        boxes = tuple(self.measure_boxes())
        page_paths = self.page_image_paths()
        page_count = max(max(b.page for b in boxes) + 1, len(page_paths), 1)
        dims: list[tuple[int, int]] = []
        for page in range(page_count):
            image = self.page_image_path(page)
            if image.exists():
                from PIL import Image

                with Image.open(image) as im:
                    dims.append(im.size)
            else:
                dims.append(DEFAULT_PAGE_DIMS)
        return PhysicalScore(page_count=page_count, page_pixel_dims=tuple(dims), boxes=boxes)


# ---------------------------------------------------------------------------
# pipeline steps shared by the CLI and the HTTP service


def run_unroll(project: Project) -> LogicalOrder:
    """Unroll the project's jumps and write logical_order.json.

    Raises:
        FileNotFoundError: measures.json is missing.
        JumpValidationError: the jump list fails validation.
    """
    boxes = project.measure_boxes()
    jumps = project.load_jumps()
    violations = validate_jumps(len(boxes), jumps)
    if violations:
        raise JumpValidationError(violations)
    order = unroll(len(boxes), jumps)
    write_json(project.path("logical_order.json"), list(order.entries))
    return order


def _staves_per_measure(
    events: Sequence[NoteheadEvent], measure_count: int, meta: StaffMetadata | None
) -> list[int]:
    if meta is not None:
        return [len(clefs) for clefs in meta.clefs]
    staves = [1] * measure_count
    for e in events:
        if e.measure_index < measure_count:
            staves[e.measure_index] = max(staves[e.measure_index], e.staff_index + 1)
    return staves


def load_transcription_bundle(project: Project) -> TranscriptionBundle:
    onset_prob, rate = read_jltr(project.require("onsets.jltr"))
    if rate != FRAME_RATE_HZ:
        raise ValueError(f"onsets.jltr declares {rate} Hz, expected {FRAME_RATE_HZ}")
    if onset_prob.shape[1] != NUM_PITCHES:
        raise ValueError(
            f"onsets.jltr has {onset_prob.shape[1]} columns, expected {NUM_PITCHES}"
        )
    frame_prob = None
    frames_path = project.path("frames.jltr")
    if frames_path.exists():
        frame_prob, _ = read_jltr(frames_path)
    notes = None
    notes_path = project.path("notes.json")
    if notes_path.exists():
        notes = tuple(
            (d["onset"], d["offset"], d["pitch"]) for d in read_json(notes_path)
        )
    duration = onset_prob.shape[0] / FRAME_RATE_HZ
    return TranscriptionBundle(
        onset_prob=onset_prob, frame_prob=frame_prob, notes=notes, duration=duration
    )


def run_align(
    project: Project, variant: str = "onset_prob", threshold: float = 0.5
) -> AlignmentRecord:
    """Build features, run DTW, and write alignment.json.

    Raises:
        FileNotFoundError: a required input is missing.
        ValueError: inputs are malformed (wrong column count, missing
            variant source, ...).
    """
    from .features import build_score_matrix

    order = project.load_logical_order()
    boxes = project.measure_boxes()
    events = project.load_noteheads()
    meta = project.load_staff_meta()
    bundle = load_transcription_bundle(project)

    score = build_score_matrix(
        events, order, _staves_per_measure(events, len(boxes), meta), meta
    )
    audio = audio_representation(bundle, variant=variant, threshold=threshold)
    result = dtw(score, audio)
    duration = bundle.duration if bundle.duration else audio.shape[0] / FRAME_RATE_HZ
    alignment = path_to_alignment(
        result.path, order.num_measures, FRAME_RATE_HZ, duration
    )
    playheads = tuple(
        playhead_from_measure(float(m), order, boxes) for m in alignment.samples
    )

    input_names = ["measures.json", "logical_order.json", "noteheads.json", "onsets.jltr"]
    for optional in ("staff_meta.json", "frames.jltr", "notes.json", "jumps.json"):
        if project.path(optional).exists():
            input_names.append(optional)
    provenance = {
        "variant": variant,
        "threshold": threshold,
        "inputs": {name: _sha256(project.path(name)) for name in input_names},
    }
    record = AlignmentRecord(alignment, playheads, provenance)
    write_json(project.path("alignment.json"), alignment_record_to_json(record))
    return record


def run_eval(project: Project) -> MeasureMetrics:
    """Evaluate alignment.json against gt.json and write eval.json."""
    record = project.load_alignment()
    gt = project.load_ground_truth()
    est_boxes = project.load_logical_order().resolve(project.measure_boxes())
    result = metrics(record.alignment, est_boxes, gt)
    write_json(
        project.path("eval.json"),
        {"macc": result.macc, "merr": result.merr, "mdev": result.mdev},
    )
    return result
