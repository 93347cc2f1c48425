"""Arithmetic-level mutators: AO, IN, IS, IC."""

from typing import List

from core.instructions import ARITH_OPS, Arith, Const, Inc, Neg, Pop, Swap
from core.program import Location
from core.types import wrap_int
from mutators.context import MethodContext
from mutators.patch import CandidatePatch

OPERATOR_NAMES = {
    "add": "addition", "sub": "subtraction", "mul": "multiplication", "div": "division",
    "rem": "modulus", "shl": "Shift Left", "shr": "Shift Right", "ushr": "Unsigned Shift Right",
    "and": "AND", "or": "OR", "xor": "XOR",
}


def _arith_operator(location: Location, i: int, ins: Arith) -> List[CandidatePatch]:
    name = OPERATOR_NAMES[ins.op]
    patches = [
        CandidatePatch("AO", location, i, i + 1, (Arith(op),),
                       f"Replaced integer {name} with {OPERATOR_NAMES[op]}")
        for op in sorted(ARITH_OPS) if op != ins.op
    ]
    patches.append(CandidatePatch("AO", location, i, i + 1, (Pop(),),
                                  f"Replaced integer {name} with first operand"))
    patches.append(CandidatePatch("AO", location, i, i + 1, (Swap(), Pop()),
                                  f"Replaced integer {name} with second operand"))
    return patches


def _increment(location: Location, i: int, ins: Inc) -> List[CandidatePatch]:
    patches = []
    flipped = wrap_int(-ins.delta)
    if flipped != ins.delta:
        patches.append(CandidatePatch("IS", location, i, i + 1, (Inc(ins.slot, flipped),),
                                      f"Changed increment from {ins.delta} to {flipped}"))
    patches.append(CandidatePatch("IS", location, i, i + 1, (), f"Removed increment {ins.delta}"))
    return patches


def _inline_constant(location: Location, i: int, ins: Const) -> List[CandidatePatch]:
    n = ins.value
    targets = sorted({wrap_int(v) for v in (0, 1, -1, n + 1, n - 1, -n)} - {n})
    return [CandidatePatch("IC", location, i, i + 1, (Const(v),), f"Substituted {n} with {v}")
            for v in targets]


def mutate_arith(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    patches: List[CandidatePatch] = []
    for i in ctx.indices(location):
        ins = ctx.method.body[i]
        if isinstance(ins, Arith):
            patches.extend(_arith_operator(location, i, ins))
        elif isinstance(ins, Neg):
            patches.append(CandidatePatch("IN", location, i, i + 1, (), "removed negation"))
        elif isinstance(ins, Inc):
            patches.extend(_increment(location, i, ins))
        elif isinstance(ins, Const) and isinstance(ins.value, int) and not isinstance(ins.value, bool):
            patches.extend(_inline_constant(location, i, ins))
    return patches
