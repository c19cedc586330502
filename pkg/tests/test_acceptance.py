"""Acceptance suite: one test per release criterion, each printing a
pass/fail line (run with ``pytest -s`` to see them inline)."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from scorealign import (
    Alignment,
    BoundingBox,
    GroundTruth,
    JumpLabel,
    LogicalOrder,
    NoteheadEvent,
    ScorePlayhead,
    StaffMetadata,
    build_score_matrix,
    dtw,
    metrics,
    n_samples,
    path_to_alignment,
    reindex,
    unroll,
)
from scorealign.project import (
    AlignmentRecord,
    alignment_record_from_json,
    alignment_record_to_json,
    boxes_from_json,
    boxes_to_json,
    ground_truth_from_json,
    ground_truth_to_json,
    jumps_from_json,
    jumps_to_json,
    noteheads_from_json,
    noteheads_to_json,
    read_jltr,
    read_json,
    staff_meta_from_json,
    staff_meta_to_json,
    write_jltr,
    write_json,
)
from synth import (
    balanced_warp,
    box_grid,
    ground_truth_from_warp,
    piecewise_warp,
    random_noteheads,
    render_audio,
)
from test_align import brute_force_min_cost, oracle_cost_matrix


def report(name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] {name}: {status}{suffix}")
    return ok


def test_unroll_correctness():
    repeat = unroll(4, [JumpLabel(3, 0, 0)])
    volta = unroll(6, [JumpLabel(4, 0, 0), JumpLabel(3, 5, 1)])
    structure_ok = (
        repeat.num_measures == 8
        and all(repeat.entries[i] == repeat.entries[i + 4] for i in range(4))
        and volta.entries == (0, 1, 2, 3, 4, 0, 1, 2, 3, 5)
    )
    elapsed = min(
        _timed(lambda: unroll(4, [JumpLabel(3, 0, 0)])) for _ in range(5)
    )
    ok = structure_ok and elapsed < 1e-3
    assert report("unroll correctness", ok, f"runtime {elapsed * 1e6:.0f} us")


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def test_dtw_matches_brute_force_enumeration():
    start = time.perf_counter()
    worst = 0.0
    for i in range(200):
        rng = np.random.default_rng(1000 + i)
        n, f = rng.integers(1, 9, size=2)
        score = rng.random((n, 88))
        audio = rng.random((f, 88))
        result = dtw(score, audio)
        expected = brute_force_min_cost(oracle_cost_matrix(score, audio))
        worst = max(worst, abs(result.cost - expected))
        assert abs(result.cost - expected) <= 1e-9
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10.0
    assert report(
        "dtw oracle equivalence",
        ok,
        f"200 instances, max |delta| {worst:.2e}, {elapsed:.1f} s",
    )


def _gt_with_offsetable_tail(onsets, duration, boxes):
    order = LogicalOrder(tuple(range(len(onsets))))
    return GroundTruth(
        order=order,
        boxes=order.resolve(boxes),
        onsets=np.array(onsets, float),
        duration=duration,
    )


def _copy_gt_alignment(gt: GroundTruth, offset: float) -> Alignment:
    times = np.arange(n_samples(gt.duration)) / 100.0
    return Alignment(gt.duration, gt.num_measures, gt.at(times) + offset)


def test_metric_golden_values():
    boxes = box_grid(2)

    gt_id = _gt_with_offsetable_tail([0.0, 2.0], 6.0, boxes)
    identity = metrics(_copy_gt_alignment(gt_id, 0.0), list(gt_id.boxes), gt_id)
    identity_ok = identity == (1.0, 0.0, 0.0)

    gt_q = _gt_with_offsetable_tail([0.0, 0.97], 1.0, boxes)
    quarter = metrics(_copy_gt_alignment(gt_q, 0.25), list(gt_q.boxes), gt_q)
    quarter_ok = (
        quarter.macc == 1.0
        and abs(quarter.merr - 0.25) <= 1e-12
        and abs(quarter.mdev - 0.25) <= 1e-12
    )

    gt_w = _gt_with_offsetable_tail([0.0, 0.995], 1.0, boxes)
    whole = metrics(_copy_gt_alignment(gt_w, 1.0), list(gt_w.boxes), gt_w)
    whole_ok = (
        whole.macc == 0.0
        and abs(whole.merr - 1.0) <= 1e-12
        and abs(whole.mdev - 1.0) <= 1e-12
    )

    rng = np.random.default_rng(77)
    jensen_ok = True
    for _ in range(100):
        M = int(rng.integers(2, 8))
        onsets = np.concatenate([[0.0], np.cumsum(rng.uniform(0.2, 1.0, M - 1))])
        gt = _gt_with_offsetable_tail(
            list(onsets), float(onsets[-1] + rng.uniform(0.3, 1.0)), box_grid(M)
        )
        samples = np.sort(rng.uniform(0, M - 1e-9, n_samples(gt.duration)))
        est = Alignment(gt.duration, M, samples)
        result = metrics(est, list(gt.boxes), gt)
        jensen_ok = jensen_ok and result.mdev >= result.merr - 1e-12

    ok = identity_ok and quarter_ok and whole_ok and jensen_ok
    assert report(
        "metric golden values",
        ok,
        f"identity={tuple(identity)}, quarter=({quarter.macc}, {quarter.merr:.12f}, "
        f"{quarter.mdev:.12f}), whole=({whole.macc}, {whole.merr:.12f}, {whole.mdev:.12f})",
    )


def test_reindex_identity_and_repeat_tie_break():
    boxes = box_grid(6)
    identity_ok = reindex(boxes, boxes).tolist() == list(range(6))

    a = BoundingBox(page=0, y=0.1, h=0.2, x=0.1, w=0.3)
    b = BoundingBox(page=0, y=0.1, h=0.2, x=0.6, w=0.3)
    matching = reindex([a, b, a, b], [a, b, a, b])
    repeat_ok = matching.tolist() == [0, 1, 2, 3] and matching[2] == 2

    ok = identity_ok and repeat_ok
    assert report("reindex identity + monotone tie-break", ok, f"repeat matching {matching.tolist()}")


def test_synthetic_end_to_end():
    start = time.perf_counter()
    maccs = []
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        score = (rng.random((48 * 16, 88)) < 0.05).astype(float)
        xs, ys = piecewise_warp(rng, 60.0, 16, knots=3)
        audio = render_audio(score, xs, ys, rng, noise=0.05)
        est = path_to_alignment(dtw(score, audio).path, 16, 31, 60.0)
        order = LogicalOrder(tuple(range(16)))
        boxes = box_grid(16)
        gt = ground_truth_from_warp(xs, ys, order, boxes)
        maccs.append(metrics(est, order.resolve(boxes), gt).macc)
    elapsed = time.perf_counter() - start
    print(f"[acceptance] e2e MAcc distribution: {[round(v, 3) for v in maccs]}")
    ok = min(maccs) >= 0.90 and elapsed < 60.0
    assert report(
        "synthetic end-to-end",
        ok,
        f"min {min(maccs):.3f}, mean {float(np.mean(maccs)):.3f}, {elapsed:.1f} s",
    )


def test_repeat_sensitivity():
    without_scores, with_scores = [], []
    for seed in range(10):
        rng = np.random.default_rng(2000 + seed)
        Q = 8
        events = random_noteheads(rng, Q, per_measure=10)
        order_with = unroll(Q, [JumpLabel(Q - 1, 0, 0)])
        order_without = unroll(Q)
        score_with = build_score_matrix(events, order_with, [1] * Q)
        score_without = build_score_matrix(events, order_without, [1] * Q)
        duration = 48.0
        xs, ys = balanced_warp(rng, duration, order_with.num_measures)
        audio = render_audio(score_with, xs, ys, rng, noise=0.05)
        boxes = box_grid(Q)
        gt = ground_truth_from_warp(xs, ys, order_with, boxes)

        est_without = path_to_alignment(dtw(score_without, audio).path, 8, 31, duration)
        without_scores.append(metrics(est_without, order_without.resolve(boxes), gt).macc)
        est_with = path_to_alignment(dtw(score_with, audio).path, 16, 31, duration)
        with_scores.append(metrics(est_with, order_with.resolve(boxes), gt).macc)

    print(
        "[acceptance] repeat sensitivity per seed: "
        + ", ".join(f"{a:.3f}->{b:.3f}" for a, b in zip(without_scores, with_scores))
    )
    ok = max(without_scores) <= 0.6 and min(with_scores) >= 0.9
    assert report(
        "repeat sensitivity",
        ok,
        f"without-label max {max(without_scores):.3f}, with-label min {min(with_scores):.3f}",
    )


def test_format_round_trips(tmp_path):
    checks = []

    boxes = box_grid(5)
    path = tmp_path / "measures.json"
    write_json(path, boxes_to_json(boxes))
    first = path.read_bytes()
    parsed = boxes_from_json(read_json(path))
    write_json(path, boxes_to_json(parsed))
    checks.append(parsed == boxes and path.read_bytes() == first)

    jumps = [JumpLabel(3, 0, 0), JumpLabel(5, 1, 1)]
    path = tmp_path / "jumps.json"
    write_json(path, jumps_to_json(jumps))
    first = path.read_bytes()
    parsed = jumps_from_json(read_json(path))
    write_json(path, jumps_to_json(parsed))
    checks.append(parsed == jumps and path.read_bytes() == first)

    events = [NoteheadEvent(0, 0, -2, 0.4375), NoteheadEvent(3, 1, 9, 0.625)]
    path = tmp_path / "noteheads.json"
    write_json(path, noteheads_to_json(events))
    first = path.read_bytes()
    parsed = noteheads_from_json(read_json(path))
    write_json(path, noteheads_to_json(parsed))
    checks.append(parsed == events and path.read_bytes() == first)

    meta = StaffMetadata(clefs=(("treble", "bass"), ("treble",)), keys=(3, -2))
    path = tmp_path / "staff_meta.json"
    write_json(path, staff_meta_to_json(meta))
    first = path.read_bytes()
    parsed = staff_meta_from_json(read_json(path))
    write_json(path, staff_meta_to_json(parsed))
    checks.append(parsed == meta and path.read_bytes() == first)

    order = LogicalOrder((0, 1, 2, 0, 1, 2))
    gt = GroundTruth(
        order=order,
        boxes=order.resolve(box_grid(3)),
        onsets=np.array([0.0, 1.5, 3.25, 4.75, 6.0, 7.125]),
        duration=9.5,
    )
    path = tmp_path / "gt.json"
    write_json(path, ground_truth_to_json(gt))
    first = path.read_bytes()
    parsed = ground_truth_from_json(read_json(path), box_grid(3))
    write_json(path, ground_truth_to_json(parsed))
    checks.append(
        parsed.order == gt.order
        and np.array_equal(parsed.onsets, gt.onsets)
        and parsed.duration == gt.duration
        and path.read_bytes() == first
    )

    order_entries = [0, 1, 2, 3, 0, 1, 2, 3]
    path = tmp_path / "logical_order.json"
    write_json(path, order_entries)
    first = path.read_bytes()
    parsed = read_json(path)
    write_json(path, parsed)
    checks.append(parsed == order_entries and path.read_bytes() == first)

    samples = np.linspace(0.0, 1.953125, n_samples(1.0))
    alignment = Alignment(1.0, 2, samples)
    record = AlignmentRecord(
        alignment,
        tuple(ScorePlayhead(0, 0.1, 0.2, 0.3) for _ in samples),
        {"variant": "onset_prob", "threshold": 0.5, "inputs": {"onsets.jltr": "sha256:00"}},
    )
    path = tmp_path / "alignment.json"
    write_json(path, alignment_record_to_json(record))
    first = path.read_bytes()
    parsed = alignment_record_from_json(read_json(path))
    write_json(path, alignment_record_to_json(parsed))
    checks.append(
        np.array_equal(parsed.alignment.samples, alignment.samples)
        and parsed.playheads == record.playheads
        and parsed.provenance == record.provenance
        and path.read_bytes() == first
    )

    rng = np.random.default_rng(0)
    matrix = rng.random((9, 88), dtype=np.float32).astype(float)
    path = tmp_path / "onsets.jltr"
    write_jltr(path, matrix)
    first = path.read_bytes()
    parsed, rate = read_jltr(path)
    write_jltr(path, parsed, rate)
    checks.append(np.array_equal(parsed, matrix) and path.read_bytes() == first)

    ok = all(checks)
    assert report("format round-trips", ok, f"{sum(checks)}/{len(checks)} formats byte-stable")
