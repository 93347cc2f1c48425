"""Canonical text for programs, methods and whole units."""

from typing import List

from core.instructions import Label
from core.program import OBJECT_CLASS, ClassDef, MethodDef, Program
from core.types import OBJECT

INDENT = "  "


def _slot_bound(label) -> str:
    return "-" if label is None else label


def method_header(method: MethodDef) -> str:
    static = "static " if method.is_static else ""
    params = ",".join(str(p) for p in method.descriptor.params)
    return f".method {static}{method.ret} {method.name}({params})"


def render_method(method: MethodDef, depth: int = 1) -> List[str]:
    """Rows of one method; every body row carries its `/*line*/` annotation."""
    pad = INDENT * depth
    rows = [pad + method_header(method)]
    for slot in method.locals:
        rows.append(f"{pad}{INDENT}.local {slot.index} {slot.name} {slot.type} "
                    f"{_slot_bound(slot.start)} {_slot_bound(slot.end)}")
    for ins, line in zip(method.body, method.lines):
        inner = pad if isinstance(ins, Label) else pad + INDENT
        rows.append(f"{inner}/*{line}*/ {ins}")
    rows.append(pad + ".end")
    return rows


def render_class(cdef: ClassDef) -> List[str]:
    header = f".class {cdef.name}"
    if cdef.super_name is not None and cdef.super_name != OBJECT:
        header += f" extends {cdef.super_name}"
    if cdef.external:
        header += " external"
    rows = [header]
    for f in cdef.fields:
        static = "static " if f.is_static else ""
        rows.append(f"{INDENT}.field {static}{f.visibility} {f.type} {f.name}")
    for m in cdef.methods:
        rows.extend(render_method(m))
    return rows


def render(program: Program) -> str:
    rows: List[str] = []
    for cdef in program.classes:
        if cdef == OBJECT_CLASS:
            continue
        if rows:
            rows.append("")
        rows.extend(render_class(cdef))
    return "\n".join(rows) + "\n"


def render_unit(unit) -> str:
    """Program text followed by its test and equivalence declarations."""
    rows = [render(unit.program).rstrip("\n")]
    if unit.tests.tests or unit.equivalents:
        rows.append("")
    for t in unit.tests:
        rows.append(f'.test "{t.name}" {t.entry.class_name}.{t.entry.method_name} expect {t.expectation}')
    for patch_id in unit.equivalents:
        rows.append(f'.equivalent "{patch_id}"')
    return "\n".join(rows) + "\n"
