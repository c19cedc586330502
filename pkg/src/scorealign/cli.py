"""Command-line entry points.

Four subcommands operate on a project directory (or, for ``serve``, on a
root directory whose subdirectories are projects)::

    scorealign unroll --project DIR
    scorealign align  --project DIR [--variant V] [--threshold X]
    scorealign eval   --project DIR
    scorealign serve  --project ROOT [--port N]

Exit codes: 0 on success, 1 for missing or malformed input files, 2 for
jump-validation failures (the report goes to stderr).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .features import AUDIO_VARIANTS
from .project import JumpValidationError, Project, run_align, run_eval, run_unroll


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scorealign",
        description="Measure-aware audio-to-score alignment toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_unroll = sub.add_parser("unroll", help="expand jump labels into logical_order.json")
    p_unroll.add_argument("--project", required=True, type=Path)

    p_align = sub.add_parser("align", help="align score and audio features, write alignment.json")
    p_align.add_argument("--project", required=True, type=Path)
    p_align.add_argument("--variant", default="onset_prob", choices=AUDIO_VARIANTS)
    p_align.add_argument("--threshold", default=0.5, type=float)

    p_eval = sub.add_parser("eval", help="score alignment.json against gt.json")
    p_eval.add_argument("--project", required=True, type=Path)

    p_serve = sub.add_parser("serve", help="serve the labeling API over HTTP")
    p_serve.add_argument("--project", required=True, type=Path, help="root directory of projects")
    p_serve.add_argument("--port", default=8000, type=int)
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def _cmd_unroll(args) -> int:
    try:
        order = run_unroll(Project(args.project))
    except FileNotFoundError as err:
        print(err, file=sys.stderr)
        return 1
    except JumpValidationError as err:
        print("jump validation failed:", file=sys.stderr)
        for violation in err.violations:
            print(f"  [{violation.kind}] {violation.message}", file=sys.stderr)
        return 2
    print(f"wrote logical_order.json ({order.num_measures} measures)")
    return 0


def _cmd_align(args) -> int:
    try:
        record = run_align(Project(args.project), variant=args.variant, threshold=args.threshold)
    except FileNotFoundError as err:
        print(err, file=sys.stderr)
        return 1
    except ValueError as err:
        print(err, file=sys.stderr)
        return 1
    a = record.alignment
    print(
        f"wrote alignment.json ({a.num_measures} measures, "
        f"{a.duration:.2f} s, {len(a.samples)} samples)"
    )
    return 0


def _cmd_eval(args) -> int:
    try:
        result = run_eval(Project(args.project))
    except FileNotFoundError as err:
        print(err, file=sys.stderr)
        return 1
    except ValueError as err:
        print(err, file=sys.stderr)
        return 1
    print(f"MAcc {result.macc:.3f}")
    print(f"MErr {result.merr:.3f}")
    print(f"MDev {result.mdev:.3f}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.project)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "unroll": _cmd_unroll,
        "align": _cmd_align,
        "eval": _cmd_eval,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
