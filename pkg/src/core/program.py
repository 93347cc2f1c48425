"""In-memory subject programs: classes, fields, methods and source locations."""

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, Iterator, Optional, Tuple

from core.errors import ResolutionError
from core.instructions import CONSTRUCTOR, Descriptor, Instruction, Label
from core.types import OBJECT, TypeTag, ref


@dataclass(frozen=True, order=True)
class Location:
    """A source line inside one method; the granularity of coverage and patching."""
    class_name: str
    method_name: str
    descriptor: str
    line: int

    def __str__(self) -> str:
        return f"{self.class_name}.{self.method_name}{self.descriptor}:{self.line}"

    @property
    def method_key(self) -> Tuple[str, str, str]:
        return (self.class_name, self.method_name, self.descriptor)


@dataclass(frozen=True)
class MethodRef:
    class_name: str
    method_name: str

    def __str__(self) -> str:
        return f"{self.class_name}.{self.method_name}"


@dataclass(frozen=True)
class FieldDef:
    name: str
    type: TypeTag
    is_static: bool = False
    visibility: str = "private"

    @property
    def is_public(self) -> bool:
        return self.visibility == "public"


@dataclass(frozen=True)
class LocalSlot:
    index: int
    name: str
    type: TypeTag
    # None means the edge of the body (start or end respectively)
    start: Optional[str] = None
    end: Optional[str] = None


@dataclass(frozen=True)
class MethodDef:
    owner: str
    name: str
    descriptor: Descriptor
    is_static: bool
    locals: Tuple[LocalSlot, ...]
    body: Tuple[Instruction, ...]
    lines: Tuple[int, ...]
    header_line: int = field(default=1, compare=False)

    @property
    def key(self) -> Tuple[str, Descriptor]:
        return (self.name, self.descriptor)

    @property
    def signature(self) -> str:
        return f"{self.owner}.{self.name}{self.descriptor}"

    @property
    def ret(self) -> TypeTag:
        return self.descriptor.ret

    @property
    def is_constructor(self) -> bool:
        return self.name == CONSTRUCTOR

    @cached_property
    def label_index(self) -> Dict[str, int]:
        return {ins.name: i for i, ins in enumerate(self.body) if isinstance(ins, Label)}

    @cached_property
    def slot_types(self) -> Tuple[TypeTag, ...]:
        return tuple(slot.type for slot in self.locals)

    def param_slots(self) -> Tuple[LocalSlot, ...]:
        first = 0 if self.is_static else 1
        return self.locals[first:first + len(self.descriptor.params)]

    def location(self, index: int) -> Location:
        return Location(self.owner, self.name, str(self.descriptor), self.lines[index])

    @cached_property
    def locations(self) -> Tuple[Location, ...]:
        return tuple(self.location(i) for i in range(len(self.body)))

    def indices_at_line(self, line: int) -> Iterator[int]:
        for i, ins in enumerate(self.body):
            if self.lines[i] == line and not isinstance(ins, Label):
                yield i

    def scope_range(self, slot: LocalSlot) -> Tuple[int, int]:
        start = 0 if slot.start is None else self.label_index[slot.start]
        end = len(self.body) if slot.end is None else self.label_index[slot.end]
        return start, end


@dataclass(frozen=True)
class ClassDef:
    name: str
    super_name: Optional[str]
    fields: Tuple[FieldDef, ...] = ()
    methods: Tuple[MethodDef, ...] = ()
    # executed but never instrumented nor mutated (library stand-ins, test drivers)
    external: bool = False

    @property
    def type(self) -> TypeTag:
        return ref(self.name)

    def field_named(self, name: str) -> Optional[FieldDef]:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def method(self, name: str, descriptor: Descriptor) -> Optional[MethodDef]:
        for m in self.methods:
            if m.name == name and m.descriptor == descriptor:
                return m
        return None


OBJECT_CLASS = ClassDef(OBJECT, None, external=True)


@dataclass(frozen=True)
class Program:
    classes: Tuple[ClassDef, ...] = field(default=())

    @classmethod
    def of(cls, classes) -> "Program":
        classes = tuple(classes)
        if not any(c.name == OBJECT for c in classes):
            classes = (OBJECT_CLASS,) + classes
        return cls(classes)

    @cached_property
    def _by_name(self) -> Dict[str, ClassDef]:
        return {c.name: c for c in self.classes}

    def has_class(self, name: str) -> bool:
        return name in self._by_name

    def class_def(self, name: str) -> ClassDef:
        try:
            return self._by_name[name]
        except KeyError:
            raise ResolutionError(f"unknown class {name}") from None

    def project_classes(self) -> Tuple[ClassDef, ...]:
        return tuple(c for c in self.classes if not c.external)

    def resolve_field(self, owner: str, name: str) -> Tuple[ClassDef, FieldDef]:
        current = owner
        while current is not None:
            cdef = self.class_def(current)
            fdef = cdef.field_named(name)
            if fdef is not None:
                return cdef, fdef
            current = cdef.super_name
        raise ResolutionError(f"unknown field {owner}.{name}")

    def resolve_method(self, owner: str, name: str, descriptor: Descriptor) -> MethodDef:
        current = owner
        while current is not None:
            cdef = self.class_def(current)
            mdef = cdef.method(name, descriptor)
            if mdef is not None:
                return mdef
            current = cdef.super_name
        raise ResolutionError(f"unknown method {owner}.{name}{descriptor}")

    def method_at(self, class_name: str, method_name: str, descriptor: str) -> MethodDef:
        for m in self.class_def(class_name).methods:
            if m.name == method_name and str(m.descriptor) == descriptor:
                return m
        raise ResolutionError(f"unknown method {class_name}.{method_name}{descriptor}")

    def static_entry(self, entry: MethodRef) -> MethodDef:
        """The zero-argument static method a test names."""
        cdef = self.class_def(entry.class_name)
        for m in cdef.methods:
            if m.name == entry.method_name and m.is_static and not m.descriptor.params:
                return m
        raise ResolutionError(f"no static zero-argument method {entry}")

    def replace_method(self, method: MethodDef) -> "Program":
        classes = []
        for cdef in self.classes:
            if cdef.name == method.owner:
                methods = tuple(method if m.key == method.key else m for m in cdef.methods)
                cdef = replace(cdef, methods=methods)
            classes.append(cdef)
        return Program(tuple(classes))

    def all_methods(self) -> Iterator[MethodDef]:
        for cdef in self.classes:
            yield from cdef.methods
