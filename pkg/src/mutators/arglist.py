"""Minimum-edit mapping from an old argument vector to an overload's parameters.

Wagner-Fischer over (old arguments, new parameters): copying an old
argument into a position whose parameter type it fits costs 0; inserting a
fresh value or deleting an old argument costs 1. Backtracking prefers
deletions and insertions at the tail, leaving copies leftmost.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

from core.types import TypeTag

COPY, INSERT, DELETE = "copy", "insert", "delete"


@dataclass(frozen=True)
class EditOp:
    kind: str
    old: Optional[int] = None
    new: Optional[int] = None


def edit_script(old: Sequence[TypeTag], new: Sequence[TypeTag],
                fits: Callable[[TypeTag, TypeTag], bool]) -> List[EditOp]:
    n, m = len(old), len(new)
    matrix = [[(i if j == 0 else j) for j in range(m + 1)] for i in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = min(matrix[i - 1][j] + 1, matrix[i][j - 1] + 1)
            if fits(old[i - 1], new[j - 1]):
                best = min(best, matrix[i - 1][j - 1])
            matrix[i][j] = best

    ops: List[EditOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and matrix[i][j] == matrix[i - 1][j] + 1:
            ops.append(EditOp(DELETE, old=i - 1))
            i -= 1
        elif j > 0 and matrix[i][j] == matrix[i][j - 1] + 1:
            ops.append(EditOp(INSERT, new=j - 1))
            j -= 1
        else:
            ops.append(EditOp(COPY, old=i - 1, new=j - 1))
            i -= 1
            j -= 1
    ops.reverse()
    return ops


def edit_cost(ops: Sequence[EditOp]) -> int:
    return sum(1 for op in ops if op.kind != COPY)
