"""Null-guard mutators: DG, MG, PC."""

from typing import List, Tuple

from core.instructions import (
    CallInsn, Cmp, Const, Dup, GetField, Instruction, Invoke, Jmp, JmpIf, Label, Load, Pop, Return,
    Store, is_constructor_call,
)
from core.program import Location
from core.types import TypeKind, TypeTag
from mutators.context import MethodContext
from mutators.patch import CandidatePatch, temp_slots

Choice = Tuple[Tuple[Instruction, ...], str]


def _return_choices(ctx: MethodContext, index: int) -> List[Choice]:
    """Ways to leave the method early: default, visible locals, fields."""
    ret = ctx.method.ret
    if ret.kind is TypeKind.VOID:
        return [((Return(),), "return")]
    return [(ing.code + (Return(ret),), f"return {ing.text}") for ing in ctx.ingredients(index, ret)]


def _value_choices(ctx: MethodContext, index: int, t: TypeTag) -> List[Choice]:
    return [(ing.code, ing.text) for ing in ctx.ingredients(index, t)]


def _null_test(skip: str) -> Tuple[Instruction, ...]:
    """Jumps to `skip` when the value on top of the stack is not null; keeps it."""
    return (Dup(), Const(None), Cmp("ne"), JmpIf(skip))


def _dereference_guard(ctx: MethodContext, location: Location, i: int, ins: GetField) -> List[CandidatePatch]:
    patches = []
    what = f"{ins.owner}.{ins.name}"
    for code, text in _return_choices(ctx, i):
        ok = ctx.labels().fresh()
        patches.append(CandidatePatch("DG", location, i, i + 1,
                                      _null_test(ok) + code + (Label(ok), ins),
                                      f"guarded dereference of {what}: {text} on null"))
    for code, text in _value_choices(ctx, i, ins.type):
        labels = ctx.labels()
        ok, end = labels.fresh(), labels.fresh()
        patches.append(CandidatePatch("DG", location, i, i + 1,
                                      _null_test(ok) + (Pop(),) + code + (Jmp(end), Label(ok), ins, Label(end)),
                                      f"guarded dereference of {what}: use {text} on null"))
    return patches


def _method_guard(ctx: MethodContext, location: Location, i: int, ins: Invoke) -> List[CandidatePatch]:
    params = ins.descriptor.params
    temps = temp_slots(ctx.method, params)
    save = tuple(Store(t.index) for t in reversed(temps))
    restore = tuple(Load(t.index) for t in temps) + (ins,)
    what = f"{ins.owner}::{ins.name}"
    patches = []
    for code, text in _return_choices(ctx, i):
        ok = ctx.labels().fresh()
        patches.append(CandidatePatch("MG", location, i, i + 1,
                                      save + _null_test(ok) + code + (Label(ok),) + restore,
                                      f"guarded call to {what}: {text} on null receiver", temps))
    ret = ins.descriptor.ret
    if ret.kind is TypeKind.VOID:
        in_place = [((), "skip the call")]
    else:
        in_place = [(code, f"use {text}") for code, text in _value_choices(ctx, i, ret)]
    for code, text in in_place:
        labels = ctx.labels()
        ok, end = labels.fresh(), labels.fresh()
        patches.append(CandidatePatch("MG", location, i, i + 1,
                                      save + _null_test(ok) + (Pop(),) + code
                                      + (Jmp(end), Label(ok)) + restore + (Label(end),),
                                      f"guarded call to {what}: {text} on null receiver", temps))
    return patches


def _result_guard(ctx: MethodContext, location: Location, i: int, ins: CallInsn) -> List[CandidatePatch]:
    patches = []
    for code, text in _return_choices(ctx, i):
        ok = ctx.labels().fresh()
        patches.append(CandidatePatch("PC", location, i, i + 1,
                                      (ins,) + _null_test(ok) + code + (Label(ok),),
                                      f"guarded result of {ins.owner}::{ins.name}: {text} on null"))
    return patches


def _entry_guard(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    method = ctx.method
    guarded = [slot for slot in method.param_slots() if slot.type.is_ref]
    if not guarded:
        return []
    first = next((i for i, ins in enumerate(method.body) if not isinstance(ins, Label)), None)
    if first is None or method.lines[first] != location.line:
        return []
    labels = ctx.labels()
    on_null, body = labels.fresh(), labels.fresh()
    tests: Tuple[Instruction, ...] = ()
    for slot in guarded:
        tests += (Load(slot.index), Const(None), Cmp("eq"), JmpIf(on_null))
    ret = method.ret
    leave = (Return(),) if ret.kind is TypeKind.VOID else (ctx.ingredients(0, ret)[0].code + (Return(ret),))
    names = " || ".join(f"{slot.name} == null" for slot in guarded)
    code = tests + (Jmp(body), Label(on_null)) + leave + (Label(body),)
    return [CandidatePatch("PC", location, 0, 0, code, f"added precondition: {names} ? return default")]


def mutate_guards(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    patches: List[CandidatePatch] = _entry_guard(ctx, location)
    for i in ctx.indices(location):
        ins = ctx.method.body[i]
        if isinstance(ins, GetField):
            patches.extend(_dereference_guard(ctx, location, i, ins))
        elif isinstance(ins, CallInsn) and not is_constructor_call(ins):
            if isinstance(ins, Invoke):
                patches.extend(_method_guard(ctx, location, i, ins))
            if ins.descriptor.ret.is_ref:
                patches.extend(_result_guard(ctx, location, i, ins))
    return patches
