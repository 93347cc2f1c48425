"""Subject-language type tags, the subtype relation and default values."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from core.errors import ContractViolation, ResolutionError

OBJECT = "Object"

INT_MIN = -(1 << 63)
INT_MAX = (1 << 63) - 1


def wrap_int(value: int) -> int:
    """Reduce to 64-bit two's complement."""
    return ((value - INT_MIN) & 0xFFFFFFFFFFFFFFFF) + INT_MIN


class TypeKind(Enum):
    INT = "int"
    BOOL = "bool"
    REF = "ref"
    VOID = "void"
    # type of the null constant; only ever seen on the verifier's operand stack
    NULL = "null"


@dataclass(frozen=True)
class TypeTag:
    kind: TypeKind
    class_name: Optional[str] = None

    @property
    def is_ref(self) -> bool:
        return self.kind in (TypeKind.REF, TypeKind.NULL)

    def __str__(self) -> str:
        if self.kind is TypeKind.REF:
            return self.class_name
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "TypeTag":
        text = text.strip()
        for prim in (INT, BOOL, VOID):
            if text == prim.kind.value:
                return prim
        if not text.isidentifier():
            raise ResolutionError(f"not a type name: {text!r}")
        return ref(text)


INT = TypeTag(TypeKind.INT)
BOOL = TypeTag(TypeKind.BOOL)
VOID = TypeTag(TypeKind.VOID)
NULL = TypeTag(TypeKind.NULL)


def ref(class_name: str) -> TypeTag:
    return TypeTag(TypeKind.REF, class_name)


def superclass_chain(class_name: str, program) -> list:
    """Class names from `class_name` up to and including Object."""
    chain = []
    name = class_name
    while name is not None:
        if name in chain:
            raise ResolutionError(f"cyclic superclass chain through {name}")
        cdef = program.class_def(name)
        chain.append(cdef.name)
        name = cdef.super_name
    return chain


def subtype_of(a: TypeTag, b: TypeTag, program) -> bool:
    """a ⪯ b: reflexive-transitive closure of super links; null is below every reference."""
    if a.kind is TypeKind.NULL:
        return b.is_ref
    if a.kind is TypeKind.REF:
        if b.kind is TypeKind.NULL:
            return False
        if b.kind is not TypeKind.REF:
            program.class_def(a.class_name)
            return False
        program.class_def(b.class_name)
        return b.class_name in superclass_chain(a.class_name, program)
    if b.kind is TypeKind.REF:
        program.class_def(b.class_name)
    return a == b


def join(a: TypeTag, b: TypeTag, program) -> Optional[TypeTag]:
    """Least upper bound at a control-flow merge, or None if the kinds differ."""
    if a == b:
        return a
    if a.kind is TypeKind.NULL and b.is_ref:
        return b
    if b.kind is TypeKind.NULL and a.is_ref:
        return a
    if a.kind is TypeKind.REF and b.kind is TypeKind.REF:
        ancestors = superclass_chain(b.class_name, program)
        for name in superclass_chain(a.class_name, program):
            if name in ancestors:
                return ref(name)
    return None


def default_value(t: TypeTag):
    """Int -> 0, Bool -> False, references -> None (null)."""
    if t.kind is TypeKind.INT:
        return 0
    if t.kind is TypeKind.BOOL:
        return False
    if t.is_ref:
        return None
    raise ContractViolation("void has no default value")
