"""Candidate patches: one instruction span of one method replaced by a new sequence."""

from dataclasses import dataclass, replace
from typing import Iterable, Set, Tuple

from core.errors import ContractViolation
from core.instructions import Instruction, Label
from core.program import LocalSlot, Location, MethodDef, Program
from core.types import TypeTag

MUTATOR_IDS = ("AP", "RV", "CC", "IS", "IC", "MV", "SW", "MC", "IN", "AO", "CO",
               "DG", "MG", "PC", "FN", "MN", "AL", "LV", "AM", "CB")


@dataclass(frozen=True)
class CandidatePatch:
    mutator_id: str
    location: Location
    start: int
    # exclusive; start == end inserts before `start`
    end: int
    replacement: Tuple[Instruction, ...]
    description: str
    extra_locals: Tuple[LocalSlot, ...] = ()
    ordinal: int = 0

    @property
    def patch_id(self) -> str:
        loc = self.location
        return f"{self.mutator_id}:{loc.class_name}.{loc.method_name}{loc.descriptor}:{loc.line}:{self.ordinal}"

    @property
    def method_key(self) -> Tuple[str, str, str]:
        return self.location.method_key

    def numbered(self, ordinal: int) -> "CandidatePatch":
        return replace(self, ordinal=ordinal)


def patched_method(method: MethodDef, patch: CandidatePatch) -> MethodDef:
    if not 0 <= patch.start <= patch.end <= len(method.body):
        raise ContractViolation(f"patch span {patch.start}:{patch.end} outside {method.signature}")
    body = method.body[:patch.start] + tuple(patch.replacement) + method.body[patch.end:]
    lines = (method.lines[:patch.start] + (patch.location.line,) * len(patch.replacement)
             + method.lines[patch.end:])
    return replace(method, body=body, lines=lines, locals=method.locals + tuple(patch.extra_locals))


def apply_patch(program: Program, patch: CandidatePatch) -> Program:
    """The program with the patch's span rewritten; every other method is shared."""
    loc = patch.location
    method = program.method_at(loc.class_name, loc.method_name, loc.descriptor)
    return program.replace_method(patched_method(method, patch))


class LabelPool:
    """Hands out label names unused in a method."""

    def __init__(self, method: MethodDef, stem: str = "M"):
        self.taken: Set[str] = set(method.label_index)
        self.stem = stem
        self.counter = 0

    def fresh(self) -> str:
        while True:
            name = f"{self.stem}{self.counter}"
            self.counter += 1
            if name not in self.taken:
                self.taken.add(name)
                return name


def temp_slots(method: MethodDef, types: Iterable[TypeTag]) -> Tuple[LocalSlot, ...]:
    """Fresh whole-body locals appended after the method's last slot."""
    base = len(method.locals)
    return tuple(LocalSlot(base + k, f"tmp{k}", t) for k, t in enumerate(types))


def contains_label(method: MethodDef, start: int, end: int) -> bool:
    return any(isinstance(ins, Label) for ins in method.body[start:end])
