"""Branching mutators: CO, SW, CB."""

from typing import List, Optional, Tuple

from core.instructions import (
    ORDERING_RELATIONS, RELATIONS, Cmp, Fail, Jmp, JmpIf, Label, Not, Pop, Return, Switch,
    falls_through,
)
from core.program import Location
from core.types import INT, TypeKind
from mutators.context import MethodContext
from mutators.patch import CandidatePatch
from mutators.visibility import reachable_without

SYMBOLS = {"eq": "==", "ne": "!=", "lt": "<", "le": "<=", "gt": ">", "ge": ">="}


def _check_kind(ctx: MethodContext, i: int) -> str:
    prev = ctx.method.body[i - 1] if i > 0 else None
    if isinstance(prev, Cmp) and prev.rel in ORDERING_RELATIONS:
        return "comparison check"
    return "equality check"


def _condition(ctx: MethodContext, location: Location, i: int, ins: JmpIf) -> List[CandidatePatch]:
    kind = _check_kind(ctx, i)
    return [
        CandidatePatch("CO", location, i, i + 1, (Pop(), Jmp(ins.label)),
                       f"removed conditional - replaced {kind} with true"),
        CandidatePatch("CO", location, i, i + 1, (Pop(),),
                       f"removed conditional - replaced {kind} with false"),
        CandidatePatch("CO", location, i, i + 1, (Not(), JmpIf(ins.label)), "negated conditional"),
    ]


def _relation(ctx: MethodContext, location: Location, i: int, ins: Cmp) -> List[CandidatePatch]:
    a, b = ctx.stack(i)[-2:]
    relations = RELATIONS if (a == INT and b == INT) else ("eq", "ne")
    return [
        CandidatePatch("CO", location, i, i + 1, (Cmp(rel),),
                       f"changed relational operator {SYMBOLS[ins.rel]} to {SYMBOLS[rel]}")
        for rel in sorted(relations) if rel != ins.rel
    ]


def _switch(location: Location, i: int, ins: Switch) -> List[CandidatePatch]:
    variants: List[Tuple[Switch, str]] = []
    for k, (value, label) in enumerate(ins.cases):
        cases = ins.cases[:k] + ((value, ins.default),) + ins.cases[k + 1:]
        variants.append((Switch(cases, label), f"swapped case {value} with default"))
    if len(ins.cases) >= 2:
        first = ins.cases[0][1]
        variants.append((Switch(tuple((v, ins.default) for v, _ in ins.cases), first),
                         f"redirected every case to default and default to case {ins.cases[0][0]}"))
    for k, (value, _) in enumerate(ins.cases):
        cases = ins.cases[:k] + ((value, ins.default),) + ins.cases[k + 1:]
        variants.append((Switch(cases, ins.default), f"redirected case {value} to default"))
    seen = {ins}
    patches = []
    for variant, description in variants:
        if variant in seen:
            continue
        seen.add(variant)
        patches.append(CandidatePatch("SW", location, i, i + 1, (variant,), description))
    return patches


def _case_end(ctx: MethodContext, start: int, stop: int) -> Optional[int]:
    """Index of the instruction that ends the case body in [start, stop)."""
    last = None
    for j in range(start, stop):
        ins = ctx.method.body[j]
        if isinstance(ins, Label):
            continue
        if ctx.stack(j) is None:
            return None
        last = j
        if not falls_through(ins):
            return j
    return last


def _case_breaker(ctx: MethodContext, location: Location, i: int, ins: Switch) -> List[CandidatePatch]:
    method = ctx.method
    starts = sorted({method.label_index[label] for label in ins.targets()})
    # CB only edits case bodies the switch dominates
    bypass = reachable_without(method, i)
    patches = []
    ret = method.ret
    for value, label in ins.cases:
        start = method.label_index[label]
        later = [s for s in starts if s > start]
        stop = later[0] if later else len(method.body)
        j = _case_end(ctx, start, stop)
        if j is None or j in bypass:
            continue
        terminator = method.body[j]
        if isinstance(terminator, (Return, Fail, Switch)):
            continue
        span = (j, j + 1) if isinstance(terminator, Jmp) else (j + 1, j + 1)
        if ret.kind is TypeKind.VOID:
            choices = [((Return(),), "return")]
        else:
            choices = [(ing.code + (Return(ret),), f"return {ing.text}") for ing in ctx.ingredients(j, ret)]
        for code, text in choices:
            patches.append(CandidatePatch("CB", location, span[0], span[1], code,
                                          f"case {value}: {text} after the case body"))
    return patches


def mutate_conditionals(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    patches: List[CandidatePatch] = []
    for i in ctx.indices(location):
        ins = ctx.method.body[i]
        if isinstance(ins, JmpIf):
            patches.extend(_condition(ctx, location, i, ins))
        elif isinstance(ins, Cmp):
            patches.extend(_relation(ctx, location, i, ins))
        elif isinstance(ins, Switch):
            patches.extend(_switch(location, i, ins))
            patches.extend(_case_breaker(ctx, location, i, ins))
    return patches
