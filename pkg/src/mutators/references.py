"""Ingredient-replacement mutators: FN, MN, AL, LV, AM."""

import logging
from typing import List

from core.instructions import (
    CallInsn, Descriptor, FieldInsn, GetField, GetStatic, Invoke, InvokeStatic, Load, Pop, PutField,
    PutStatic, Store, Swap, is_constructor_call,
)
from core.program import Location
from core.types import TypeKind
from mutators.arglist import COPY, DELETE, edit_script
from mutators.context import MethodContext
from mutators.patch import CandidatePatch, temp_slots

logger = logging.getLogger(__name__)


def _field_name(ctx: MethodContext, location: Location, i: int, ins: FieldInsn) -> List[CandidatePatch]:
    declaring, fdef = ctx.program.resolve_field(ins.owner, ins.name)
    patches = []
    for other in sorted(declaring.fields, key=lambda f: f.name):
        if other.name == fdef.name or other.is_static != fdef.is_static or other.type != fdef.type:
            continue
        if not other.is_public and declaring.name != ctx.method.owner:
            continue
        patches.append(CandidatePatch("FN", location, i, i + 1,
                                      (type(ins)(declaring.name, other.name, other.type),),
                                      f"replaced field {declaring.name}.{fdef.name} with {declaring.name}.{other.name}"))
    return patches


def _method_name(ctx: MethodContext, location: Location, i: int, ins: CallInsn) -> List[CandidatePatch]:
    patches = []
    for m in ctx.methods_of_owner(ins.owner):
        if m.name == ins.name or m.descriptor != ins.descriptor or m.is_static != ins.is_static:
            continue
        patches.append(CandidatePatch("MN", location, i, i + 1, (type(ins)(ins.owner, m.name, m.descriptor),),
                                      f"replaced call to {ins.owner}::{ins.name} with {ins.owner}::{m.name}"))
    return patches


def _overload_fits(ctx: MethodContext, ins: CallInsn, descriptor: Descriptor) -> bool:
    old, new = ins.descriptor.ret, descriptor.ret
    if old.kind is TypeKind.VOID or new.kind is TypeKind.VOID:
        return old == new
    return ctx.subtype(new, old)


def _insert_value(ctx: MethodContext, i: int, wanted) -> tuple:
    """Preferred filler for a new parameter: visible local, then field, then default."""
    choices = ctx.ingredients(i, wanted)
    for kind in ("local", "field", "default"):
        for ing in choices:
            if ing.kind == kind:
                return ing.code
    return choices[0].code


def _argument_list(ctx: MethodContext, location: Location, i: int, ins: CallInsn) -> List[CandidatePatch]:
    patches = []
    old = ins.descriptor.params
    for m in ctx.methods_of_owner(ins.owner):
        if m.name != ins.name or m.descriptor.params == old or m.is_static != ins.is_static:
            continue
        if not _overload_fits(ctx, ins, m.descriptor):
            continue
        temps = temp_slots(ctx.method, old)
        code = tuple(Store(t.index) for t in reversed(temps))
        for op in edit_script(old, m.descriptor.params, ctx.subtype):
            if op.kind == COPY:
                code += (Load(temps[op.old].index),)
            elif op.kind != DELETE:
                code += _insert_value(ctx, i, m.descriptor.params[op.new])
        code += (type(ins)(ins.owner, m.name, m.descriptor),)
        patches.append(CandidatePatch("AL", location, i, i + 1, code,
                                      f"replaced call to {ins.owner}::{ins.name}{ins.descriptor} "
                                      f"with overload {ins.owner}::{m.name}{m.descriptor}", temps))
    return patches


def _local_variable(ctx: MethodContext, location: Location, i: int, ins) -> List[CandidatePatch]:
    method = ctx.method
    slot = method.locals[ins.slot]
    is_store = isinstance(ins, Store)
    patches = []
    for other in ctx.visible_slots(i):
        if other.index == slot.index or other.type != slot.type:
            continue
        if is_store and other.index == 0 and not method.is_static:
            continue
        patches.append(CandidatePatch("LV", location, i, i + 1, (type(ins)(other.index),),
                                      f"replaced local variable {slot.name} with {other.name}"))
    for f in ctx.accessible_fields():
        if f.type != slot.type:
            continue
        if not is_store:
            code = ctx.field_code(f)
        elif f.is_static:
            code = (PutStatic(ctx.owner.name, f.name, f.type),)
        else:
            code = (Load(0), Swap(), PutField(ctx.owner.name, f.name, f.type))
        patches.append(CandidatePatch("LV", location, i, i + 1, code,
                                      f"replaced local variable {slot.name} with {ctx.field_text(f)}"))
    return patches


def _accessor(ctx: MethodContext, location: Location, i: int, ins: FieldInsn) -> List[CandidatePatch]:
    patches = []
    call = InvokeStatic if ins.is_static else Invoke
    what = f"{ins.owner}.{ins.name}"
    if not ins.is_write:
        for m in ctx.methods_of_owner(ins.owner):
            if m.is_static != ins.is_static or m.descriptor.params or m.ret.kind is TypeKind.VOID:
                continue
            if ctx.subtype(m.ret, ins.type):
                patches.append(CandidatePatch("AM", location, i, i + 1, (call(ins.owner, m.name, m.descriptor),),
                                              f"replaced read of {what} with call to {ins.owner}::{m.name}"))
        drop = () if ins.is_static else (Pop(),)
        for slot in ctx.visible_slots(i):
            if ctx.subtype(slot.type, ins.type):
                patches.append(CandidatePatch("AM", location, i, i + 1, drop + (Load(slot.index),),
                                              f"replaced read of {what} with local variable {slot.name}"))
        return patches
    for m in ctx.methods_of_owner(ins.owner):
        if m.is_static != ins.is_static or len(m.descriptor.params) != 1:
            continue
        if ctx.subtype(ins.type, m.descriptor.params[0]):
            code = (call(ins.owner, m.name, m.descriptor),)
            if m.ret.kind is not TypeKind.VOID:
                code += (Pop(),)
            patches.append(CandidatePatch("AM", location, i, i + 1, code,
                                          f"replaced write of {what} with call to {ins.owner}::{m.name}"))
    return patches


def mutate_references(ctx: MethodContext, location: Location) -> List[CandidatePatch]:
    patches: List[CandidatePatch] = []
    for i in ctx.indices(location):
        ins = ctx.method.body[i]
        if isinstance(ins, FieldInsn):
            patches.extend(_field_name(ctx, location, i, ins))
        elif isinstance(ins, CallInsn) and not is_constructor_call(ins):
            patches.extend(_method_name(ctx, location, i, ins))
            patches.extend(_argument_list(ctx, location, i, ins))
        elif isinstance(ins, (Load, Store)):
            patches.extend(_local_variable(ctx, location, i, ins))
        if isinstance(ins, (GetField, GetStatic, PutField, PutStatic)):
            patches.extend(_accessor(ctx, location, i, ins))
    return patches
