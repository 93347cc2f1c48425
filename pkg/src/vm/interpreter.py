"""Deterministic, fuel-bounded interpreter for verified programs."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from core.errors import ConfigurationError, MvmError, ResolutionError
from core.instructions import (
    Arith, Cmp, Const, Dup, Fail, GetField, GetStatic, Inc, Invoke, InvokeStatic, Jmp, JmpIf,
    Label, Load, Neg, New, Not, Pop, PutField, PutStatic, Return, Store, Swap, Switch,
)
from core.program import Location, MethodDef, MethodRef, Program
from core.types import TypeKind, default_value, superclass_chain, wrap_int

logger = logging.getLogger(__name__)

NULL_DEREFERENCE = "null-dereference"
DIVISION_BY_ZERO = "division-by-zero"
EXPLICIT_FAIL = "fail"
STACK_OVERFLOW = "stack-overflow"

MAX_CALL_DEPTH = 10_000
_MASK64 = 0xFFFFFFFFFFFFFFFF


class Status(Enum):
    RETURNED = "returned"
    FAILED = "failed"
    FUEL_EXHAUSTED = "fuel-exhausted"


@dataclass(frozen=True)
class ExecOutcome:
    status: Status
    value: object = None
    reason: Optional[str] = None
    instructions_executed: int = 0
    trace: Optional[Tuple[Location, ...]] = None

    @property
    def observable(self) -> tuple:
        """The final state compared between a program and its mutant."""
        return (self.status, self.value)

    def __str__(self) -> str:
        if self.status is Status.RETURNED:
            return f"returned {self.value!r}"
        if self.status is Status.FAILED:
            return f"failed ({self.reason})"
        return "fuel exhausted"


class RuntimeTypeError(MvmError):
    """Raised in checked mode when a value of the wrong kind reaches an instruction."""


class ObjectRef:
    """A heap record: field slots initialized to default values."""
    __slots__ = ("class_name", "fields")

    def __init__(self, class_name: str, fields: dict):
        self.class_name = class_name
        self.fields = fields

    def __repr__(self) -> str:
        return f"<{self.class_name}@{id(self):x}>"


class _SubjectFailure(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class _Frame:
    __slots__ = ("method", "pc", "locals", "stack")

    def __init__(self, method: MethodDef, args: list):
        self.method = method
        self.pc = 0
        self.locals = [default_value(s.type) for s in method.locals]
        self.locals[:len(args)] = args
        self.stack: List[object] = []


def _java_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


_ARITH = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _java_div,
    "rem": lambda a, b: a - b * _java_div(a, b),
    "shl": lambda a, b: a << (b & 63),
    "shr": lambda a, b: a >> (b & 63),
    "ushr": lambda a, b: (a & _MASK64) >> (b & 63),
    "and": lambda a, b: a & b,
    "or": lambda a, b: a | b,
    "xor": lambda a, b: a ^ b,
}

_RELATIONS = {
    "eq": lambda a, b: a is b if isinstance(a, ObjectRef) or isinstance(b, ObjectRef) else a == b,
    "ne": lambda a, b: not (a is b if isinstance(a, ObjectRef) or isinstance(b, ObjectRef) else a == b),
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
}


class Interpreter:
    """Single-use: owns one fresh heap and one execution."""

    def __init__(self, program: Program, fuel: int, trace: bool = False, checked: bool = False):
        if fuel <= 0:
            raise ConfigurationError("fuel must be positive")
        self.program = program
        self.fuel = fuel
        self.checked = checked
        self.executed = 0
        self.trace: Optional[List[Location]] = [] if trace else None
        self.statics = {}
        for cdef in program.classes:
            for f in cdef.fields:
                if f.is_static:
                    self.statics[(cdef.name, f.name)] = default_value(f.type)
        self.frames: List[_Frame] = []

    def run(self, entry: MethodDef) -> ExecOutcome:
        self.frames.append(_Frame(entry, []))
        try:
            value = self._loop()
        except _SubjectFailure as failure:
            return self._outcome(Status.FAILED, reason=failure.reason)
        if value is _FUEL_OUT:
            return self._outcome(Status.FUEL_EXHAUSTED)
        return self._outcome(Status.RETURNED, value=value)

    def _outcome(self, status: Status, value=None, reason=None) -> ExecOutcome:
        trace = tuple(self.trace) if self.trace is not None else None
        return ExecOutcome(status, value, reason, self.executed, trace)

    def _loop(self):
        frames = self.frames
        while True:
            frame = frames[-1]
            body = frame.method.body
            ins = body[frame.pc]
            if isinstance(ins, Label):
                frame.pc += 1
                continue
            if self.executed >= self.fuel:
                return _FUEL_OUT
            self.executed += 1
            if self.trace is not None:
                self.trace.append(frame.method.locations[frame.pc])
            frame.pc += 1
            result = self._step(frame, ins)
            if result is not _CONTINUE:
                return result

    def _check(self, value, kind: TypeKind) -> None:
        if not self.checked:
            return
        if kind is TypeKind.INT:
            ok = isinstance(value, int) and not isinstance(value, bool)
        elif kind is TypeKind.BOOL:
            ok = isinstance(value, bool)
        else:
            ok = value is None or isinstance(value, ObjectRef)
        if not ok:
            raise RuntimeTypeError(f"expected {kind.value}, found {value!r}")

    def _pop(self, frame: _Frame):
        if self.checked and not frame.stack:
            raise RuntimeTypeError("operand stack underflow")
        return frame.stack.pop()

    def _jump(self, frame: _Frame, label: str) -> None:
        frame.pc = frame.method.label_index[label]

    def _receiver(self, value) -> ObjectRef:
        if value is None:
            raise _SubjectFailure(NULL_DEREFERENCE)
        return value

    def _step(self, frame: _Frame, ins):
        stack = frame.stack
        if isinstance(ins, Const):
            stack.append(ins.value)
        elif isinstance(ins, Load):
            stack.append(frame.locals[ins.slot])
        elif isinstance(ins, Store):
            frame.locals[ins.slot] = self._pop(frame)
        elif isinstance(ins, Inc):
            self._check(frame.locals[ins.slot], TypeKind.INT)
            frame.locals[ins.slot] = wrap_int(frame.locals[ins.slot] + ins.delta)
        elif isinstance(ins, Arith):
            b = self._pop(frame)
            a = self._pop(frame)
            self._check(a, TypeKind.INT)
            self._check(b, TypeKind.INT)
            if ins.op in ("div", "rem") and b == 0:
                raise _SubjectFailure(DIVISION_BY_ZERO)
            stack.append(wrap_int(_ARITH[ins.op](a, b)))
        elif isinstance(ins, Neg):
            a = self._pop(frame)
            self._check(a, TypeKind.INT)
            stack.append(wrap_int(-a))
        elif isinstance(ins, Not):
            a = self._pop(frame)
            self._check(a, TypeKind.BOOL)
            stack.append(not a)
        elif isinstance(ins, Cmp):
            b = self._pop(frame)
            a = self._pop(frame)
            stack.append(bool(_RELATIONS[ins.rel](a, b)))
        elif isinstance(ins, Jmp):
            self._jump(frame, ins.label)
        elif isinstance(ins, JmpIf):
            cond = self._pop(frame)
            self._check(cond, TypeKind.BOOL)
            if cond:
                self._jump(frame, ins.label)
        elif isinstance(ins, Switch):
            key = self._pop(frame)
            self._check(key, TypeKind.INT)
            target = ins.default
            for value, label in ins.cases:
                if value == key:
                    target = label
                    break
            self._jump(frame, target)
        elif isinstance(ins, New):
            fields = {}
            for name in superclass_chain(ins.class_name, self.program):
                for f in self.program.class_def(name).fields:
                    if not f.is_static:
                        fields.setdefault(f.name, default_value(f.type))
            stack.append(ObjectRef(ins.class_name, fields))
        elif isinstance(ins, GetField):
            obj = self._receiver(self._pop(frame))
            stack.append(obj.fields[ins.name])
        elif isinstance(ins, PutField):
            value = self._pop(frame)
            obj = self._receiver(self._pop(frame))
            obj.fields[ins.name] = value
        elif isinstance(ins, GetStatic):
            declaring, _ = self.program.resolve_field(ins.owner, ins.name)
            stack.append(self.statics[(declaring.name, ins.name)])
        elif isinstance(ins, PutStatic):
            declaring, _ = self.program.resolve_field(ins.owner, ins.name)
            self.statics[(declaring.name, ins.name)] = self._pop(frame)
        elif isinstance(ins, (Invoke, InvokeStatic)):
            self._call(frame, ins)
        elif isinstance(ins, Return):
            value = None if ins.type.kind is TypeKind.VOID else self._pop(frame)
            self.frames.pop()
            if not self.frames:
                return value
            if ins.type.kind is not TypeKind.VOID:
                self.frames[-1].stack.append(value)
        elif isinstance(ins, Pop):
            self._pop(frame)
        elif isinstance(ins, Swap):
            b = self._pop(frame)
            a = self._pop(frame)
            stack.extend((b, a))
        elif isinstance(ins, Dup):
            a = self._pop(frame)
            stack.extend((a, a))
        elif isinstance(ins, Fail):
            raise _SubjectFailure(EXPLICIT_FAIL)
        else:
            raise RuntimeTypeError(f"cannot execute {ins!r}")
        return _CONTINUE

    def _call(self, frame: _Frame, ins) -> None:
        n = len(ins.descriptor.params)
        args = frame.stack[len(frame.stack) - n:] if n else []
        if n:
            del frame.stack[-n:]
        if isinstance(ins, Invoke):
            receiver = self._receiver(self._pop(frame))
            target = self.program.resolve_method(receiver.class_name, ins.name, ins.descriptor)
            args = [receiver] + args
        else:
            target = self.program.resolve_method(ins.owner, ins.name, ins.descriptor)
        if len(self.frames) >= MAX_CALL_DEPTH:
            raise _SubjectFailure(STACK_OVERFLOW)
        self.frames.append(_Frame(target, args))


_CONTINUE = object()
_FUEL_OUT = object()


def execute(program: Program, entry: MethodRef, fuel: int, trace: bool = False,
            checked: bool = False) -> ExecOutcome:
    """Run `entry` (a static zero-argument method) on a fresh heap.

    Null dereference, division by zero and `fail` yield a FAILED outcome;
    running past `fuel` instructions yields FUEL_EXHAUSTED.
    """
    try:
        method = program.static_entry(entry)
    except ResolutionError as exc:
        raise ConfigurationError(f"unresolved test entry: {exc}") from None
    return Interpreter(program, fuel, trace=trace, checked=checked).run(method)
