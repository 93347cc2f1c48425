"""Stack-type verification of programs.

Every method body is abstractly interpreted over operand-stack types with a
worklist until a fixpoint; joins merge reference types to their least common
superclass.  The per-index stack shapes are also what the mutators consult to
keep patches type-preserving.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.errors import Diagnostic, MvmError, VerificationError
from core.instructions import (
    ORDERING_RELATIONS, Arith, CallInsn, Cmp, Const, Dup, Fail, FieldInsn, Inc, Instruction,
    Jmp, JmpIf, Label, Load, Neg, New, Not, Pop, Return, Store, Swap, Switch, branch_targets,
    falls_through,
)
from core.program import MethodDef, Program
from core.types import BOOL, INT, NULL, TypeKind, TypeTag, join, ref, subtype_of, superclass_chain

logger = logging.getLogger(__name__)

Stack = Tuple[TypeTag, ...]


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    diagnostic: Optional[Diagnostic] = None

    def raise_for_error(self) -> None:
        if not self.ok:
            raise VerificationError(self.diagnostic)


class _Reject(Exception):
    def __init__(self, message: str):
        self.message = message


def verify(program: Program) -> VerificationResult:
    """Accept iff every class is well formed and every method body stack-type-checks."""
    try:
        for cdef in program.classes:
            _check_class(program, cdef)
            for method in cdef.methods:
                analyze_method(program, method)
    except VerificationError as exc:
        return VerificationResult(False, exc.diagnostic)
    except MvmError as exc:
        return VerificationResult(False, Diagnostic(str(exc)))
    return VerificationResult(True)


def check(program: Program) -> None:
    verify(program).raise_for_error()


def _check_class(program: Program, cdef) -> None:
    def reject(message):
        raise VerificationError(Diagnostic(f"class {cdef.name}: {message}"))

    if cdef.super_name is not None and not program.has_class(cdef.super_name):
        reject(f"unknown superclass {cdef.super_name}")
    try:
        superclass_chain(cdef.name, program)
    except MvmError as exc:
        reject(str(exc))
    seen = set()
    for f in cdef.fields:
        if f.name in seen:
            reject(f"duplicate field {f.name}")
        seen.add(f.name)
        _check_value_type(program, f.type, reject, f"field {f.name}")
    keys = set()
    for m in cdef.methods:
        if m.key in keys:
            reject(f"duplicate method {m.name}{m.descriptor}")
        keys.add(m.key)


def _check_value_type(program, t: TypeTag, reject, what: str) -> None:
    if t.kind is TypeKind.VOID:
        reject(f"{what} cannot have type void")
    if t.kind is TypeKind.REF and not program.has_class(t.class_name):
        reject(f"{what} has unknown type {t.class_name}")


def _check_header(program: Program, method: MethodDef) -> None:
    def reject(message):
        raise VerificationError(Diagnostic(f"{method.signature}: {message}"))

    if len(method.lines) != len(method.body):
        reject("line map does not cover the body")
    if any(line < 1 for line in method.lines):
        reject("line numbers must be positive")
    labels = [ins.name for ins in method.body if isinstance(ins, Label)]
    if len(labels) != len(set(labels)):
        reject("duplicate label")
    for p in method.descriptor.params:
        _check_value_type(program, p, reject, "parameter")
    if method.ret.kind is TypeKind.REF and not program.has_class(method.ret.class_name):
        reject(f"unknown return type {method.ret}")
    for expected, slot in enumerate(method.locals):
        if slot.index != expected:
            reject(f"local slots must be dense from 0, found {slot.index}")
        _check_value_type(program, slot.type, reject, f"local {slot.name}")
        for label in (slot.start, slot.end):
            if label is not None and label not in method.label_index:
                reject(f"scope label {label} of local {slot.name} does not exist")
        start, end = method.scope_range(slot)
        if start > end:
            reject(f"scope of local {slot.name} ends before it starts")
    expected_params = ([] if method.is_static else [ref(method.owner)]) + list(method.descriptor.params)
    if len(method.locals) < len(expected_params):
        reject("fewer locals than parameters")
    for slot, t in zip(method.locals, expected_params):
        if slot.type != t:
            reject(f"slot {slot.index} must have type {t}")
    if method.is_constructor and (method.is_static or method.ret.kind is not TypeKind.VOID):
        reject("constructors are non-static and return void")


def analyze_method(program: Program, method: MethodDef) -> List[Optional[Stack]]:
    """Operand-stack types before each instruction (None where unreachable)."""
    _check_header(program, method)
    body = method.body
    stacks: List[Optional[Stack]] = [None] * len(body)
    if not body:
        raise VerificationError(Diagnostic(f"{method.signature}: empty body"))
    stacks[0] = ()
    worklist = [0]
    while worklist:
        i = worklist.pop()
        ins = body[i]
        try:
            out = _transfer(program, method, ins, list(stacks[i]))
            successors = []
            if falls_through(ins):
                if i + 1 >= len(body):
                    raise _Reject("execution falls off the end of the method")
                successors.append(i + 1)
            for label in branch_targets(ins):
                if label not in method.label_index:
                    raise _Reject(f"unknown label {label}")
                successors.append(method.label_index[label])
            for succ in successors:
                merged = _merge(program, stacks[succ], out)
                if merged != stacks[succ]:
                    stacks[succ] = merged
                    worklist.append(succ)
        except _Reject as exc:
            raise VerificationError(
                Diagnostic(f"{exc.message} at `{ins}`", location=method.location(i))) from None
        except MvmError as exc:
            raise VerificationError(
                Diagnostic(f"{exc} at `{ins}`", location=method.location(i))) from None
    return stacks


def _merge(program, old: Optional[Stack], new: Stack) -> Stack:
    if old is None:
        return new
    if len(old) != len(new):
        raise _Reject(f"stack height mismatch at join ({len(old)} vs {len(new)})")
    merged = []
    for a, b in zip(old, new):
        j = join(a, b, program)
        if j is None:
            raise _Reject(f"incompatible stack types at join ({a} vs {b})")
        merged.append(j)
    return tuple(merged)


def _pop(stack: list, n: int = 1) -> List[TypeTag]:
    if len(stack) < n:
        raise _Reject("operand stack underflow")
    cut = len(stack) - n
    popped = stack[cut:]
    del stack[cut:]
    return popped


def _expect(program, actual: TypeTag, wanted: TypeTag, what: str) -> None:
    if not subtype_of(actual, wanted, program):
        raise _Reject(f"{what}: expected {wanted}, found {actual}")


def _slot(method: MethodDef, index: int):
    if not 0 <= index < len(method.locals):
        raise _Reject(f"unknown local slot {index}")
    return method.locals[index]


def _transfer(program: Program, method: MethodDef, ins: Instruction, stack: list) -> Stack:
    if isinstance(ins, Label):
        pass
    elif isinstance(ins, Const):
        if ins.value is None:
            stack.append(NULL)
        elif isinstance(ins.value, bool):
            stack.append(BOOL)
        elif isinstance(ins.value, int):
            stack.append(INT)
        else:
            raise _Reject(f"unsupported constant {ins.value!r}")
    elif isinstance(ins, Load):
        stack.append(_slot(method, ins.slot).type)
    elif isinstance(ins, Store):
        (value,) = _pop(stack)
        _expect(program, value, _slot(method, ins.slot).type, "store")
    elif isinstance(ins, Inc):
        if _slot(method, ins.slot).type != INT:
            raise _Reject("inc on a non-int local")
    elif isinstance(ins, Arith):
        a, b = _pop(stack, 2)
        if a != INT or b != INT:
            raise _Reject(f"arith {ins.op} needs (int, int), found ({a}, {b})")
        stack.append(INT)
    elif isinstance(ins, Neg):
        (a,) = _pop(stack)
        if a != INT:
            raise _Reject(f"neg needs int, found {a}")
        stack.append(INT)
    elif isinstance(ins, Not):
        (a,) = _pop(stack)
        if a != BOOL:
            raise _Reject(f"not needs bool, found {a}")
        stack.append(BOOL)
    elif isinstance(ins, Cmp):
        a, b = _pop(stack, 2)
        if ins.rel in ORDERING_RELATIONS:
            ok = a == INT and b == INT
        else:
            ok = (a == b and a.kind in (TypeKind.INT, TypeKind.BOOL)) or (a.is_ref and b.is_ref)
        if not ok:
            raise _Reject(f"cmp {ins.rel} cannot compare ({a}, {b})")
        stack.append(BOOL)
    elif isinstance(ins, Jmp):
        pass
    elif isinstance(ins, JmpIf):
        (a,) = _pop(stack)
        if a != BOOL:
            raise _Reject(f"jmpif needs bool, found {a}")
    elif isinstance(ins, Switch):
        (a,) = _pop(stack)
        if a != INT:
            raise _Reject(f"switch needs int, found {a}")
    elif isinstance(ins, New):
        program.class_def(ins.class_name)
        stack.append(ref(ins.class_name))
    elif isinstance(ins, FieldInsn):
        declaring, fdef = program.resolve_field(ins.owner, ins.name)
        if fdef.is_static != ins.is_static:
            raise _Reject(f"{ins.mnemonic} on {'static' if fdef.is_static else 'instance'} field {ins.name}")
        if fdef.type != ins.type:
            raise _Reject(f"field {ins.name} has type {fdef.type}, not {ins.type}")
        if not fdef.is_public and declaring.name != method.owner:
            raise _Reject(f"private field {declaring.name}.{ins.name} is not accessible")
        if ins.is_write:
            (value,) = _pop(stack)
            _expect(program, value, fdef.type, "field write")
        if not ins.is_static:
            (receiver,) = _pop(stack)
            _expect(program, receiver, ref(ins.owner), "field receiver")
        if not ins.is_write:
            stack.append(fdef.type)
    elif isinstance(ins, CallInsn):
        target = program.resolve_method(ins.owner, ins.name, ins.descriptor)
        if target.is_static != ins.is_static:
            raise _Reject(f"{ins.mnemonic} on {'static' if target.is_static else 'instance'} method {ins.name}")
        args = _pop(stack, len(ins.descriptor.params))
        for arg, param in zip(args, ins.descriptor.params):
            _expect(program, arg, param, f"argument of {ins.name}")
        if not ins.is_static:
            (receiver,) = _pop(stack)
            _expect(program, receiver, ref(ins.owner), "call receiver")
        if ins.descriptor.ret.kind is not TypeKind.VOID:
            stack.append(ins.descriptor.ret)
    elif isinstance(ins, Return):
        if ins.type != method.ret:
            raise _Reject(f"return {ins.type} in a method returning {method.ret}")
        if ins.type.kind is not TypeKind.VOID:
            (value,) = _pop(stack)
            _expect(program, value, ins.type, "return value")
    elif isinstance(ins, Pop):
        _pop(stack)
    elif isinstance(ins, Swap):
        a, b = _pop(stack, 2)
        stack.extend((b, a))
    elif isinstance(ins, Dup):
        (a,) = _pop(stack)
        stack.extend((a, a))
    elif isinstance(ins, Fail):
        pass
    else:
        raise _Reject(f"unknown instruction {ins!r}")
    return tuple(stack)
