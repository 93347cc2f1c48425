"""Per-method facts the mutators consult: stack types, visible locals, reachable members."""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Tuple

from core.instructions import Const, GetField, GetStatic, Instruction, Label, Load, CONSTRUCTOR
from core.program import ClassDef, FieldDef, LocalSlot, Location, MethodDef, Program
from core.types import TypeKind, TypeTag, default_value, subtype_of
from core.verifier import Stack, analyze_method
from mutators.patch import LabelPool
from mutators.visibility import VisibleLocals, visible_locals


@dataclass(frozen=True)
class Ingredient:
    """A value a patch can push: a default, a visible local or a field of the mutated class."""
    kind: str
    type: TypeTag
    code: Tuple[Instruction, ...]
    text: str


class MethodContext:
    def __init__(self, program: Program, method: MethodDef):
        self.program = program
        self.method = method
        self.stacks: List[Optional[Stack]] = analyze_method(program, method)

    @cached_property
    def visibility(self) -> VisibleLocals:
        return visible_locals(self.method)

    @cached_property
    def owner(self) -> ClassDef:
        return self.program.class_def(self.method.owner)

    def labels(self) -> LabelPool:
        return LabelPool(self.method)

    def location(self, index: int) -> Location:
        return self.method.location(index)

    def indices(self, location: Location) -> List[int]:
        """Reachable instruction indices mapped to the location's line."""
        return [i for i in self.method.indices_at_line(location.line) if self.stacks[i] is not None]

    def stack(self, index: int) -> Stack:
        return self.stacks[index]

    def subtype(self, a: TypeTag, b: TypeTag) -> bool:
        return subtype_of(a, b, self.program)

    def accessible_fields(self) -> Tuple[FieldDef, ...]:
        """Fields of the mutated class reachable from this method, by name."""
        fields = [f for f in self.owner.fields if f.is_static or not self.method.is_static]
        return tuple(sorted(fields, key=lambda f: f.name))

    def field_code(self, f: FieldDef) -> Tuple[Instruction, ...]:
        if f.is_static:
            return (GetStatic(self.owner.name, f.name, f.type),)
        return (Load(0), GetField(self.owner.name, f.name, f.type))

    def field_text(self, f: FieldDef) -> str:
        return f"{self.owner.name}.{f.name}" if f.is_static else f"this.{f.name}"

    def visible_slots(self, index: int) -> Tuple[LocalSlot, ...]:
        return self.visibility.at(index)

    def ingredients(self, index: int, wanted: TypeTag, exact: bool = False) -> List[Ingredient]:
        """Default value, then visible locals, then fields whose type fits `wanted`."""
        def fits(t: TypeTag) -> bool:
            return t == wanted if exact else self.subtype(t, wanted)

        found = [Ingredient("default", wanted, (Const(default_value(wanted)),), _const_text(wanted))]
        for slot in self.visible_slots(index):
            if fits(slot.type):
                found.append(Ingredient("local", slot.type, (Load(slot.index),), slot.name))
        for f in self.accessible_fields():
            if fits(f.type):
                found.append(Ingredient("field", f.type, self.field_code(f), self.field_text(f)))
        return found

    def methods_of_owner(self, owner: str) -> Tuple:
        """Non-constructor methods declared by `owner`, by (name, descriptor)."""
        cdef = self.program.class_def(owner)
        methods = [m for m in cdef.methods if m.name != CONSTRUCTOR]
        return tuple(sorted(methods, key=lambda m: (m.name, str(m.descriptor))))

    def preceding_const(self, index: int) -> Optional[Const]:
        """The constant pushed right before `index` on the same line, if any."""
        j = index - 1
        while j >= 0 and isinstance(self.method.body[j], Label):
            j -= 1
        if j >= 0 and isinstance(self.method.body[j], Const) and self.method.lines[j] == self.method.lines[index]:
            return self.method.body[j]
        return None


def _const_text(t: TypeTag) -> str:
    if t.kind is TypeKind.INT:
        return "0"
    if t.kind is TypeKind.BOOL:
        return "false"
    return "null"
