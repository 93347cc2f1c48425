"""Return and call-site mutators: RV, MC, AP, CC, MV."""

from typing import List

from core.instructions import (
    CallInsn, Cmp, Const, Dup, Fail, FieldInsn, JmpIf, Label, New, Pop, Return, Swap, Arith,
    format_const, is_constructor_call,
)
from core.program import Location
from core.types import TypeKind, default_value
from mutators.context import MethodContext
from mutators.patch import CandidatePatch, contains_label


def _return_value(ctx: MethodContext, location: Location, i: int, ins: Return) -> List[CandidatePatch]:
    t = ins.type
    ret = Return(t)
    if t.kind is TypeKind.BOOL:
        hint = ctx.preceding_const(i)
        e = format_const(hint.value) if hint is not None else "e"
        return [CandidatePatch("RV", location, i, i + 1, (Const(False), Cmp("eq"), ret),
                               f"replaced boolean return with ({e} == false ? true : false)")]
    if t.kind is TypeKind.INT:
        labels = ctx.labels()
        one = labels.fresh()
        return [
            CandidatePatch("RV", location, i, i + 1, (Pop(), Const(0), ret),
                           "replaced int return with 0"),
            CandidatePatch("RV", location, i, i + 1, (Const(1), Arith("add"), ret),
                           "replaced int return value e with e + 1"),
            CandidatePatch("RV", location, i, i + 1,
                           (Const(0), Cmp("eq"), JmpIf(one), Const(0), ret, Label(one), Const(1), ret),
                           "replaced int return value e with (e == 0 ? 1 : 0)"),
        ]
    if t.is_ref:
        fail = ctx.labels().fresh()
        return [
            CandidatePatch("RV", location, i, i + 1, (Pop(), Const(None), ret),
                           "replaced return value with null"),
            CandidatePatch("RV", location, i, i + 1,
                           (Dup(), Const(None), Cmp("eq"), JmpIf(fail), ret, Label(fail), Fail()),
                           "replaced return value e with (e == null ? fail : e)"),
        ]
    return []


def _method_call(location: Location, i: int, ins: CallInsn) -> List[CandidatePatch]:
    pops = (Pop(),) * ins.stack_arity
    ret = ins.descriptor.ret
    if ret.kind is TypeKind.VOID:
        return [CandidatePatch("MC", location, i, i + 1, pops, f"removed call to {ins.owner}::{ins.name}")]
    value = default_value(ret)
    return [CandidatePatch("MC", location, i, i + 1, pops + (Const(value),),
                           f"removed call to {ins.owner}::{ins.name}, and supplied default return "
                           f"value {format_const(value)}")]


def _argument_propagation(ctx: MethodContext, location: Location, i: int, ins: CallInsn) -> List[CandidatePatch]:
    ret = ins.descriptor.ret
    k = ins.stack_arity
    if ret.kind is TypeKind.VOID or k == 0:
        return []
    operands = ctx.stack(i)[-k:]
    patches = []
    for j, t in enumerate(operands):
        if not ctx.subtype(t, ret):
            continue
        code = (Pop(),) * (k - 1 - j) + (Swap(), Pop()) * j
        if not ins.is_static and j == 0:
            what = "receiver"
        else:
            what = f"argument {j if ins.is_static else j - 1}"
        patches.append(CandidatePatch("AP", location, i, i + 1, code,
                                      f"replaced call to {ins.owner}::{ins.name} with {what}"))
    return patches


def _constructor_call(ctx: MethodContext, location: Location, i: int, ins: New) -> List[CandidatePatch]:
    body = ctx.method.body
    height = len(ctx.stack(i))
    for j in range(i + 1, len(body)):
        stack = ctx.stack(j)
        if stack is None or isinstance(body[j], Label):
            return []
        if is_constructor_call(body[j], ins.class_name) and len(stack) - body[j].stack_arity == height + 1:
            if contains_label(ctx.method, i, j + 1):
                return []
            return [CandidatePatch("CC", location, i, j + 1, (Const(None),),
                                   f"removed call to {ins.class_name}::<init>, replaced with null")]
        if isinstance(body[j], (Return, Fail)) or len(stack) <= height:
            return []
    return []


def _member_variable(location: Location, i: int, ins: FieldInsn) -> List[CandidatePatch]:
    value = default_value(ins.type)
    return [CandidatePatch("MV", location, i, i + 1, (Pop(), Const(value), ins),
                           f"Removed assignment to member variable {ins.name}, "
                           f"replaced with {format_const(value)}")]


def mutate_returns(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    patches: List[CandidatePatch] = []
    for i in ctx.indices(location):
        ins = ctx.method.body[i]
        if isinstance(ins, Return) and ins.type.kind is not TypeKind.VOID:
            patches.extend(_return_value(ctx, location, i, ins))
        elif isinstance(ins, CallInsn) and not is_constructor_call(ins):
            patches.extend(_method_call(location, i, ins))
            patches.extend(_argument_propagation(ctx, location, i, ins))
        elif isinstance(ins, New):
            patches.extend(_constructor_call(ctx, location, i, ins))
        elif isinstance(ins, FieldInsn) and ins.is_write:
            patches.extend(_member_variable(location, i, ins))
    return patches
