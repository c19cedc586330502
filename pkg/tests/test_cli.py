from __future__ import annotations

import numpy as np
import pytest

from scorealign import (
    LogicalOrder,
    n_samples,
    playhead_from_measure,
)
from scorealign.cli import main
from scorealign.project import (
    AlignmentRecord,
    Project,
    alignment_record_to_json,
    read_json,
    write_json,
)
from conftest import make_repeat_project, make_self_aligned_project, write_gt, write_measures
from synth import box_grid

from scorealign import Alignment


def write_alignment_from_samples(root, samples, duration, order, boxes):
    alignment = Alignment(duration=duration, num_measures=order.num_measures, samples=samples)
    playheads = tuple(playhead_from_measure(float(m), order, boxes) for m in alignment.samples)
    record = AlignmentRecord(alignment, playheads, {"variant": "onset_prob", "threshold": 0.5, "inputs": {}})
    write_json(root / "alignment.json", alignment_record_to_json(record))


class TestUnrollCommand:
    def test_repeat_fixture(self, repeat_project, capsys):
        assert main(["unroll", "--project", str(repeat_project)]) == 0
        assert read_json(repeat_project / "logical_order.json") == [0, 1, 2, 3, 0, 1, 2, 3]
        assert "8 measures" in capsys.readouterr().out

    def test_missing_jumps_file_is_identity(self, tmp_path):
        root = make_repeat_project(tmp_path / "p", jump_pairs=None)
        assert main(["unroll", "--project", str(root)]) == 0
        assert read_json(root / "logical_order.json") == [0, 1, 2, 3]

    def test_out_of_range_jump_exits_2_and_names_it(self, tmp_path, capsys):
        root = make_repeat_project(tmp_path / "p", jump_pairs=((9, 0),))
        assert main(["unroll", "--project", str(root)]) == 2
        err = capsys.readouterr().err
        assert "out_of_range" in err and "9" in err

    def test_missing_measures_exits_1(self, tmp_path, capsys):
        (tmp_path / "empty").mkdir()
        assert main(["unroll", "--project", str(tmp_path / "empty")]) == 1
        assert "measures.json" in capsys.readouterr().err


class TestAlignCommand:
    def test_self_alignment_reaches_full_accuracy(self, self_aligned_project, capsys):
        root = str(self_aligned_project)
        assert main(["unroll", "--project", root]) == 0
        assert main(["align", "--project", root]) == 0
        assert main(["eval", "--project", root]) == 0
        out = capsys.readouterr().out
        assert "MAcc 1.000" in out

    def test_flags_recorded_in_provenance(self, self_aligned_project):
        root = str(self_aligned_project)
        main(["unroll", "--project", root])
        assert main(["align", "--project", root, "--variant", "onset_pred", "--threshold", "0.6"]) == 0
        provenance = read_json(self_aligned_project / "alignment.json")["provenance"]
        assert provenance["variant"] == "onset_pred"
        assert provenance["threshold"] == 0.6

    def test_missing_onsets_exits_1_naming_the_file(self, self_aligned_project, capsys):
        (self_aligned_project / "onsets.jltr").unlink()
        main(["unroll", "--project", str(self_aligned_project)])
        assert main(["align", "--project", str(self_aligned_project)]) == 1
        assert "onsets.jltr" in capsys.readouterr().err

    def test_wrong_column_count_exits_1(self, self_aligned_project, capsys):
        from scorealign.project import write_jltr

        main(["unroll", "--project", str(self_aligned_project)])
        write_jltr(self_aligned_project / "onsets.jltr", np.zeros((10, 87)))
        assert main(["align", "--project", str(self_aligned_project)]) == 1
        assert "columns" in capsys.readouterr().err

    def test_rerun_is_byte_identical(self, self_aligned_project):
        root = str(self_aligned_project)
        main(["unroll", "--project", root])
        main(["align", "--project", root])
        first = (self_aligned_project / "alignment.json").read_bytes()
        main(["align", "--project", root])
        assert (self_aligned_project / "alignment.json").read_bytes() == first


class TestEvalCommand:
    def test_alignment_copied_from_ground_truth_is_perfect(self, tmp_path, capsys):
        root = tmp_path / "perfect"
        root.mkdir()
        boxes = box_grid(3)
        order = LogicalOrder((0, 1, 2))
        onsets, duration = [0.0, 2.0, 4.0], 6.0
        write_measures(root, boxes)
        write_json(root / "logical_order.json", list(order.entries))
        write_gt(root, order, onsets, duration)

        gt = Project(root).load_ground_truth()
        times = np.arange(n_samples(duration)) / 100.0
        write_alignment_from_samples(root, gt.at(times), duration, order, boxes)

        assert main(["eval", "--project", str(root)]) == 0
        out = capsys.readouterr().out
        assert "MAcc 1.000" in out and "MErr 0.000" in out and "MDev 0.000" in out
        data = read_json(root / "eval.json")
        assert (data["macc"], data["merr"], data["mdev"]) == (1.0, 0.0, 0.0)

    def test_constant_one_measure_offset(self, tmp_path, capsys):
        root = tmp_path / "offset"
        root.mkdir()
        boxes = box_grid(2)
        order = LogicalOrder((0, 1))
        write_measures(root, boxes)
        write_json(root / "logical_order.json", list(order.entries))
        write_gt(root, order, [0.0, 0.995], 1.0)

        gt = Project(root).load_ground_truth()
        times = np.arange(n_samples(1.0)) / 100.0
        write_alignment_from_samples(root, gt.at(times) + 1.0, 1.0, order, boxes)

        assert main(["eval", "--project", str(root)]) == 0
        out = capsys.readouterr().out
        assert "MAcc 0.000" in out and "MErr 1.000" in out and "MDev 1.000" in out

    def test_mixed_offsets_match_plain_reimplementation(self, tmp_path):
        root = tmp_path / "mixed"
        root.mkdir()
        boxes = box_grid(4)
        order = LogicalOrder((0, 1, 2, 3))
        onsets, duration = [0.0, 1.1, 2.3, 2.9], 5.0
        write_measures(root, boxes)
        write_json(root / "logical_order.json", list(order.entries))
        write_gt(root, order, onsets, duration)

        rng = np.random.default_rng(9)
        samples = np.minimum(np.cumsum(rng.uniform(0, 0.012, n_samples(duration))), 4 - 1e-9)
        write_alignment_from_samples(root, samples, duration, order, boxes)
        assert main(["eval", "--project", str(root)]) == 0
        data = read_json(root / "eval.json")

        # Straight-line reimplementation of the sampling and the three sums.
        gt = Project(root).load_ground_truth()
        est = Project(root).load_alignment().alignment
        N = n_samples(duration)
        diffs = [float(est.at(duration * i / N)) - float(gt.at(duration * i / N)) for i in range(N)]
        assert data["macc"] == pytest.approx(sum(abs(d) <= 0.5 for d in diffs) / N, abs=1e-12)
        assert data["merr"] == pytest.approx(sum(abs(d) for d in diffs) / N, abs=1e-12)
        assert data["mdev"] == pytest.approx((sum(d * d for d in diffs) / N) ** 0.5, abs=1e-12)

    def test_missing_ground_truth_exits_1(self, self_aligned_project, capsys):
        root = str(self_aligned_project)
        main(["unroll", "--project", root])
        main(["align", "--project", root])
        (self_aligned_project / "gt.json").unlink()
        assert main(["eval", "--project", root]) == 1
        assert "gt.json" in capsys.readouterr().err
