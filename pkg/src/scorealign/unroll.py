"""Expand annotated jumps into the logical measure order.

A jump label says "after playing measure ``from_index``, continue at
measure ``to_index``". Unrolling walks the piece from measure 0; at each
measure it checks the *next not-yet-fired* jump in annotation order and
fires it when its source matches, otherwise it steps to the following
measure. Each label fires exactly once, so repeats are annotated as one
backward jump, a first/second ending as a backward jump out of the first
ending followed by a forward jump into the second, and a "play three
times" bar as two separate backward jumps.

Firing strictly in annotation order is a convention of this tool: it is
what makes nearby or nested jumps unambiguous (annotators label in
performance order) and rules out infinite loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import JumpLabel, LogicalOrder


class UnreachableJumpError(ValueError):
    """A jump's source measure is never visited while it is next in line."""

    def __init__(self, jump: JumpLabel):
        self.jump = jump
        super().__init__(
            f"{jump} never fires: measure {jump.from_index} is not reached "
            f"while this jump is next in the annotation order"
        )


@dataclass(frozen=True)
class JumpViolation:
    """One problem found while validating a jump list.

    ``kind`` is one of ``out_of_range``, ``self_jump``, ``bad_order``,
    ``unreachable``.
    """

    kind: str
    message: str
    jump: JumpLabel | None = None


def _sorted_by_order(jumps: Sequence[JumpLabel]) -> list[JumpLabel]:
    return sorted(jumps, key=lambda j: j.order)


def unroll(measure_count: int, jumps: Sequence[JumpLabel] = ()) -> LogicalOrder:
    """Expand ``jumps`` over ``measure_count`` physical measures.

    Args:
        measure_count: number of physical measures Q (>= 1).
        jumps: jump labels; ``order`` fields must be 0..len-1, unique.

    Returns:
        The logical order. With no jumps this is ``0..Q-1``; a single
        backward jump from the last measure to 0 plays the piece twice.

    Raises:
        ValueError: on invalid inputs (bad indices, self jumps, bad order
            values).
        UnreachableJumpError: if some jump can never fire.
    """
    if measure_count < 1:
        raise ValueError(f"measure_count must be >= 1, got {measure_count}")
    ordered = _sorted_by_order(jumps)
    if [j.order for j in ordered] != list(range(len(ordered))):
        raise ValueError("jump order values must be unique and contiguous from 0")
    for jump in ordered:
        if not (0 <= jump.from_index < measure_count and 0 <= jump.to_index < measure_count):
            raise ValueError(f"{jump} references a measure outside [0, {measure_count})")
        if jump.from_index == jump.to_index:
            raise ValueError(f"{jump} jumps to its own source measure")

    max_len = measure_count * (len(ordered) + 1)
    entries: list[int] = []
    current = 0
    next_jump = 0
    while current < measure_count:
        entries.append(current)
        assert len(entries) <= max_len, "unroll exceeded its provable length bound"
        if next_jump < len(ordered) and ordered[next_jump].from_index == current:
            current = ordered[next_jump].to_index
            next_jump += 1
        else:
            current += 1
    if next_jump < len(ordered):
        raise UnreachableJumpError(ordered[next_jump])
    return LogicalOrder(tuple(entries))


def validate_jumps(measure_count: int, jumps: Sequence[JumpLabel]) -> list[JumpViolation]:
    """Report every problem in a jump list without raising.

    An empty report means :func:`unroll` will succeed on these inputs.
    Structural problems (bad indices, self jumps, duplicate or gapped
    order values) are reported first; if there are none, a dry-run unroll
    checks that every jump actually fires.
    """
    violations: list[JumpViolation] = []
    for jump in jumps:
        if not (0 <= jump.from_index < measure_count):
            violations.append(
                JumpViolation(
                    "out_of_range",
                    f"{jump}: source measure {jump.from_index} outside [0, {measure_count})",
                    jump,
                )
            )
        if not (0 <= jump.to_index < measure_count):
            violations.append(
                JumpViolation(
                    "out_of_range",
                    f"{jump}: target measure {jump.to_index} outside [0, {measure_count})",
                    jump,
                )
            )
        if jump.from_index == jump.to_index:
            violations.append(
                JumpViolation("self_jump", f"{jump}: source equals target", jump)
            )
    orders = [j.order for j in jumps]
    if sorted(orders) != list(range(len(jumps))):
        violations.append(
            JumpViolation(
                "bad_order",
                f"jump order values must be unique and contiguous from 0, got {sorted(orders)}",
            )
        )
    if violations:
        return violations
    try:
        unroll(measure_count, jumps)
    except UnreachableJumpError as err:
        violations.append(JumpViolation("unreachable", str(err), err.jump))
    return violations
