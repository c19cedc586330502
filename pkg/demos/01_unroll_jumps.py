"""Unrolling jump annotations into the played measure order.

A jump label is a click pair: "after measure X, continue at measure Y".
One rule covers plain repeats, first/second endings, and D.S.-style
figures, because labels fire in annotation order, once each.
"""

from scorealign import JumpLabel, unroll, validate_jumps

# A 4-measure piece with a repeat sign at the end: one backward jump.
repeat = [JumpLabel(from_index=3, to_index=0, order=0)]
order = unroll(4, repeat)
print("4 measures + repeat:", list(order.entries))
# -> [0, 1, 2, 3, 0, 1, 2, 3]: the piece plays twice, M = 8.

# A volta: measures 0-3 are the body, 4 is the first ending, 5 the second.
# Label the backward jump out of the first ending, then the forward jump
# that skips into the second ending on the final pass.
volta = [JumpLabel(4, 0, 0), JumpLabel(3, 5, 1)]
print("volta:", list(unroll(6, volta).entries))
# -> [0, 1, 2, 3, 4, 0, 1, 2, 3, 5]

# Annotation order matters: swapped labels would ask the performer to
# skip ahead before ever reaching the first ending. validate_jumps
# reports exactly that without raising.
swapped = [JumpLabel(3, 5, 0), JumpLabel(4, 0, 1)]
for violation in validate_jumps(6, swapped):
    print(f"violation [{violation.kind}]: {violation.message}")

# "Play this bar three times" is just two backward jumps.
print("three passes:", list(unroll(2, [JumpLabel(1, 0, 0), JumpLabel(1, 0, 1)]).entries))
