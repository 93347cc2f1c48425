"""Typed instruction set of the stack machine.

Labels are pseudo-instructions kept inline in a method body: they occupy an
index (so spans and scopes can refer to them) but are never executed.
"""

from dataclasses import dataclass
from typing import ClassVar, Optional, Tuple

from core.errors import ResolutionError
from core.types import TypeTag, VOID

ARITH_OPS = ("add", "sub", "mul", "div", "rem", "shl", "shr", "ushr", "and", "or", "xor")
RELATIONS = ("eq", "ne", "lt", "le", "gt", "ge")
ORDERING_RELATIONS = ("lt", "le", "gt", "ge")
NEGATED_RELATION = {"eq": "ne", "ne": "eq", "lt": "ge", "ge": "lt", "gt": "le", "le": "gt"}
CONSTRUCTOR = "<init>"


@dataclass(frozen=True)
class Descriptor:
    params: Tuple[TypeTag, ...]
    ret: TypeTag

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.params) + ")" + str(self.ret)

    @classmethod
    def parse(cls, text: str) -> "Descriptor":
        text = text.replace(" ", "")
        if not text.startswith("(") or ")" not in text:
            raise ResolutionError(f"malformed descriptor {text!r}")
        inner, ret = text[1:].split(")", 1)
        params = tuple(TypeTag.parse(p) for p in inner.split(",")) if inner else ()
        return cls(params, TypeTag.parse(ret))


def format_const(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


class Instruction:
    mnemonic: ClassVar[str] = ""

    def operand_text(self) -> str:
        return ""

    def __str__(self) -> str:
        operands = self.operand_text()
        return f"{self.mnemonic} {operands}" if operands else self.mnemonic


@dataclass(frozen=True)
class Label(Instruction):
    name: str
    mnemonic: ClassVar[str] = "label"

    def __str__(self) -> str:
        return f"{self.name}:"


@dataclass(frozen=True)
class Const(Instruction):
    value: object
    mnemonic: ClassVar[str] = "const"

    def operand_text(self) -> str:
        return format_const(self.value)


@dataclass(frozen=True)
class Load(Instruction):
    slot: int
    mnemonic: ClassVar[str] = "load"

    def operand_text(self) -> str:
        return str(self.slot)


@dataclass(frozen=True)
class Store(Instruction):
    slot: int
    mnemonic: ClassVar[str] = "store"

    def operand_text(self) -> str:
        return str(self.slot)


@dataclass(frozen=True)
class Inc(Instruction):
    slot: int
    delta: int
    mnemonic: ClassVar[str] = "inc"

    def operand_text(self) -> str:
        return f"{self.slot} {self.delta}"


@dataclass(frozen=True)
class Arith(Instruction):
    op: str
    mnemonic: ClassVar[str] = "arith"

    def operand_text(self) -> str:
        return self.op


@dataclass(frozen=True)
class Neg(Instruction):
    mnemonic: ClassVar[str] = "neg"


@dataclass(frozen=True)
class Not(Instruction):
    mnemonic: ClassVar[str] = "not"


@dataclass(frozen=True)
class Cmp(Instruction):
    rel: str
    mnemonic: ClassVar[str] = "cmp"

    def operand_text(self) -> str:
        return self.rel


@dataclass(frozen=True)
class Jmp(Instruction):
    label: str
    mnemonic: ClassVar[str] = "jmp"

    def operand_text(self) -> str:
        return self.label


@dataclass(frozen=True)
class JmpIf(Instruction):
    label: str
    mnemonic: ClassVar[str] = "jmpif"

    def operand_text(self) -> str:
        return self.label


@dataclass(frozen=True)
class Switch(Instruction):
    cases: Tuple[Tuple[int, str], ...]
    default: str
    mnemonic: ClassVar[str] = "switch"

    def operand_text(self) -> str:
        parts = [f"{value}:{label}" for value, label in self.cases]
        parts.append(f"default:{self.default}")
        return " ".join(parts)

    def targets(self) -> Tuple[str, ...]:
        return tuple(label for _, label in self.cases) + (self.default,)


@dataclass(frozen=True)
class New(Instruction):
    class_name: str
    mnemonic: ClassVar[str] = "new"

    def operand_text(self) -> str:
        return self.class_name


@dataclass(frozen=True)
class FieldInsn(Instruction):
    owner: str
    name: str
    type: TypeTag
    is_static: ClassVar[bool] = False
    is_write: ClassVar[bool] = False

    def operand_text(self) -> str:
        return f"{self.owner}.{self.name} {self.type}"


@dataclass(frozen=True)
class GetField(FieldInsn):
    mnemonic: ClassVar[str] = "getfield"


@dataclass(frozen=True)
class PutField(FieldInsn):
    mnemonic: ClassVar[str] = "putfield"
    is_write: ClassVar[bool] = True


@dataclass(frozen=True)
class GetStatic(FieldInsn):
    mnemonic: ClassVar[str] = "getstatic"
    is_static: ClassVar[bool] = True


@dataclass(frozen=True)
class PutStatic(FieldInsn):
    mnemonic: ClassVar[str] = "putstatic"
    is_static: ClassVar[bool] = True
    is_write: ClassVar[bool] = True


@dataclass(frozen=True)
class CallInsn(Instruction):
    owner: str
    name: str
    descriptor: Descriptor
    is_static: ClassVar[bool] = False

    def operand_text(self) -> str:
        return f"{self.owner}.{self.name}{self.descriptor}"

    @property
    def stack_arity(self) -> int:
        """Operand stack slots consumed (arguments plus receiver)."""
        return len(self.descriptor.params) + (0 if self.is_static else 1)


@dataclass(frozen=True)
class Invoke(CallInsn):
    mnemonic: ClassVar[str] = "invoke"


@dataclass(frozen=True)
class InvokeStatic(CallInsn):
    mnemonic: ClassVar[str] = "invokestatic"
    is_static: ClassVar[bool] = True


@dataclass(frozen=True)
class Return(Instruction):
    type: TypeTag = VOID
    mnemonic: ClassVar[str] = "return"

    def operand_text(self) -> str:
        return str(self.type)


@dataclass(frozen=True)
class Pop(Instruction):
    mnemonic: ClassVar[str] = "pop"


@dataclass(frozen=True)
class Swap(Instruction):
    mnemonic: ClassVar[str] = "swap"


@dataclass(frozen=True)
class Dup(Instruction):
    mnemonic: ClassVar[str] = "dup"


@dataclass(frozen=True)
class Fail(Instruction):
    mnemonic: ClassVar[str] = "fail"


def branch_targets(ins: Instruction) -> Tuple[str, ...]:
    if isinstance(ins, (Jmp, JmpIf)):
        return (ins.label,)
    if isinstance(ins, Switch):
        return ins.targets()
    return ()


def falls_through(ins: Instruction) -> bool:
    return not isinstance(ins, (Jmp, Switch, Return, Fail))


def is_constructor_call(ins: Instruction, owner: Optional[str] = None) -> bool:
    return (isinstance(ins, Invoke) and ins.name == CONSTRUCTOR
            and (owner is None or ins.owner == owner))
