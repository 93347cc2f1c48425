"""Line-oriented parser for `.mvm` assembly units.

A unit holds classes, their fields and methods, test declarations and
declared-equivalent patch ids:

    .class Lexer
      .field private int count
      .method static int weight(int)
        .local 0 c int - -
        line 307
        load 0
        ...
      .end
    .test "weight of a space" Driver.spaceWeight expect int 64
    .equivalent "AO:Lexer.weight(int)int:308:3"

Rows may carry a `/*N*/` prefix (source line for that row only); `line N`
sets the source line of the rows that follow; rows with neither use their
physical line.
"""

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from core.errors import AsmSyntaxError, Diagnostic, MvmError
from core.instructions import (
    ARITH_OPS, RELATIONS, Arith, Cmp, Const, Descriptor, Dup, Fail, GetField, GetStatic, Inc,
    Instruction, Invoke, InvokeStatic, Jmp, JmpIf, Label, Load, Neg, New, Not, Pop, PutField,
    PutStatic, Return, Store, Swap, Switch,
)
from core.program import ClassDef, FieldDef, LocalSlot, MethodDef, MethodRef, Program
from core.types import INT_MAX, INT_MIN, OBJECT, TypeTag, ref
from core.verifier import check as verify_program
from testsuite.model import Expectation, TestCase, TestSuite

logger = logging.getLogger(__name__)

MNEMONICS = (
    "const", "load", "store", "inc", "arith", "neg", "not", "cmp", "jmp", "jmpif", "switch",
    "new", "getfield", "putfield", "getstatic", "putstatic", "invoke", "invokestatic",
    "return", "pop", "swap", "dup", "fail",
)

_LINE_PREFIX = re.compile(r"^/\*\s*(\d+)\s*\*/\s*")
_LABEL = re.compile(r"^([A-Za-z_][\w$]*):\s*(.*)$")
_CLASS = re.compile(r"^\.class\s+(\w+)(?:\s+extends\s+(\w+))?(\s+external)?$")
_FIELD = re.compile(r"^\.field\s+(?:(static)\s+)?(?:(public|private)\s+)?(\w+)\s+(\w+)$")
_METHOD = re.compile(r"^\.method\s+(?:(static)\s+)?(\w+)\s+(<init>|\w+)\s*\(([^)]*)\)$")
_LOCAL = re.compile(r"^\.local\s+(\d+)\s+(\w+)\s+(\w+)\s+(\S+)\s+(\S+)$")
_TEST = re.compile(r'^\.test\s+"([^"]+)"\s+(\w+)\.(\w+)\s+expect\s+(.+)$')
_EQUIVALENT = re.compile(r'^\.equivalent\s+"([^"]+)"$')
_MEMBER = re.compile(r"^(\w+)\.(<init>|\w+)$")
_CALL = re.compile(r"^(\w+)\.(<init>|\w+)(\(.*)$")


@dataclass(frozen=True)
class SourceUnit:
    path: Optional[str]
    program: Program
    tests: TestSuite
    equivalents: Tuple[str, ...] = ()
    class_lines: Dict[str, int] = field(default_factory=dict, compare=False)

    @property
    def file_name(self) -> str:
        return Path(self.path).name if self.path else "<memory>"


class _LineError(Exception):
    def __init__(self, message: str, column: Optional[int] = None, expected: tuple = ()):
        self.message = message
        self.column = column
        self.expected = expected


@dataclass
class _MethodBuilder:
    owner: str
    name: str
    descriptor: Descriptor
    is_static: bool
    header_line: int
    locals: List[LocalSlot] = field(default_factory=list)
    body: List[Instruction] = field(default_factory=list)
    lines: List[int] = field(default_factory=list)
    current_line: Optional[int] = None

    def build(self) -> MethodDef:
        declared = {slot.index: slot for slot in self.locals}
        params = ([ref(self.owner)] if not self.is_static else []) + list(self.descriptor.params)
        # parameter slots may be left implicit
        for index, t in enumerate(params):
            if index not in declared:
                name = "this" if (index == 0 and not self.is_static) else f"p{index}"
                declared[index] = LocalSlot(index, name, t)
        slots = tuple(declared[i] for i in sorted(declared))
        return MethodDef(self.owner, self.name, self.descriptor, self.is_static, slots,
                         tuple(self.body), tuple(self.lines), self.header_line)


@dataclass
class _ClassBuilder:
    name: str
    super_name: Optional[str]
    external: bool
    line: int
    fields: List[FieldDef] = field(default_factory=list)
    methods: List[MethodDef] = field(default_factory=list)

    def build(self) -> ClassDef:
        return ClassDef(self.name, self.super_name, tuple(self.fields), tuple(self.methods), self.external)


def _int(token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise _LineError(f"expected an integer, found {token!r}") from None
    if not INT_MIN <= value <= INT_MAX:
        raise _LineError(f"integer {value} out of 64-bit range")
    return value


def _const(token: str):
    if token == "true":
        return True
    if token == "false":
        return False
    if token == "null":
        return None
    return _int(token)


def _type(token: str) -> TypeTag:
    try:
        return TypeTag.parse(token)
    except MvmError as exc:
        raise _LineError(str(exc)) from None


def _descriptor(text: str) -> Descriptor:
    try:
        return Descriptor.parse(text)
    except MvmError as exc:
        raise _LineError(str(exc)) from None


def _arity(mnemonic: str, operands: List[str], n: int) -> None:
    if len(operands) != n:
        raise _LineError(f"{mnemonic} takes {n} operand(s), found {len(operands)}")


def _field_insn(cls, mnemonic: str, operands: List[str]) -> Instruction:
    _arity(mnemonic, operands, 2)
    m = _MEMBER.match(operands[0])
    if not m:
        raise _LineError(f"expected Class.field, found {operands[0]!r}")
    return cls(m.group(1), m.group(2), _type(operands[1]))


def _call_insn(cls, mnemonic: str, operands: List[str]) -> Instruction:
    _arity(mnemonic, operands, 1)
    m = _CALL.match(operands[0])
    if not m:
        raise _LineError(f"expected Class.method(params)ret, found {operands[0]!r}")
    return cls(m.group(1), m.group(2), _descriptor(m.group(3)))


def _switch(operands: List[str]) -> Switch:
    cases, default = [], None
    for op in operands:
        key, sep, label = op.partition(":")
        if not sep or not label:
            raise _LineError(f"expected value:label, found {op!r}")
        if key == "default":
            default = label
        else:
            cases.append((_int(key), label))
    if default is None:
        raise _LineError("switch needs a default:label target")
    return Switch(tuple(cases), default)


def parse_instruction(text: str) -> Instruction:
    """One instruction row (no label, no line prefix)."""
    parts = text.split()
    if not parts:
        raise _LineError("empty instruction row")
    mnemonic, operands = parts[0], parts[1:]
    if mnemonic == "const":
        _arity(mnemonic, operands, 1)
        return Const(_const(operands[0]))
    if mnemonic in ("load", "store"):
        _arity(mnemonic, operands, 1)
        return (Load if mnemonic == "load" else Store)(_int(operands[0]))
    if mnemonic == "inc":
        _arity(mnemonic, operands, 2)
        return Inc(_int(operands[0]), _int(operands[1]))
    if mnemonic == "arith":
        _arity(mnemonic, operands, 1)
        if operands[0] not in ARITH_OPS:
            raise _LineError(f"unknown arithmetic operator {operands[0]!r}", expected=ARITH_OPS)
        return Arith(operands[0])
    if mnemonic == "cmp":
        _arity(mnemonic, operands, 1)
        if operands[0] not in RELATIONS:
            raise _LineError(f"unknown relation {operands[0]!r}", expected=RELATIONS)
        return Cmp(operands[0])
    if mnemonic in ("jmp", "jmpif"):
        _arity(mnemonic, operands, 1)
        return (Jmp if mnemonic == "jmp" else JmpIf)(operands[0])
    if mnemonic == "switch":
        return _switch(operands)
    if mnemonic == "new":
        _arity(mnemonic, operands, 1)
        return New(operands[0])
    if mnemonic in ("getfield", "putfield", "getstatic", "putstatic"):
        cls = {"getfield": GetField, "putfield": PutField,
               "getstatic": GetStatic, "putstatic": PutStatic}[mnemonic]
        return _field_insn(cls, mnemonic, operands)
    if mnemonic in ("invoke", "invokestatic"):
        return _call_insn(Invoke if mnemonic == "invoke" else InvokeStatic, mnemonic, operands)
    if mnemonic == "return":
        if len(operands) > 1:
            raise _LineError("return takes at most one operand")
        return Return(_type(operands[0])) if operands else Return()
    simple = {"neg": Neg, "not": Not, "pop": Pop, "swap": Swap, "dup": Dup, "fail": Fail}
    if mnemonic in simple:
        _arity(mnemonic, operands, 0)
        return simple[mnemonic]()
    raise _LineError(f"unknown opcode {mnemonic!r}", column=1, expected=MNEMONICS)


def _expectation(text: str) -> Expectation:
    parts = text.split()
    if parts == ["fail"]:
        return Expectation.fail()
    if len(parts) == 2 and parts[0] == "int":
        return Expectation.int_(_int(parts[1]))
    if len(parts) == 2 and parts[0] == "bool" and parts[1] in ("true", "false"):
        return Expectation.bool_(parts[1] == "true")
    raise _LineError(f"bad expectation {text!r}", expected=("int N", "bool B", "fail"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.diagnostics: List[Diagnostic] = []
        self.classes: List[_ClassBuilder] = []
        self.tests: List[TestCase] = []
        self.equivalents: List[str] = []
        self.cls: Optional[_ClassBuilder] = None
        self.method: Optional[_MethodBuilder] = None

    def run(self) -> None:
        for lineno, raw in enumerate(self.text.splitlines(), start=1):
            line = raw.split(";", 1)[0].strip()
            if not line:
                continue
            try:
                self._line(lineno, line)
            except _LineError as exc:
                self.diagnostics.append(Diagnostic(exc.message, lineno, exc.column, expected=exc.expected))
        if self.method is not None:
            self.diagnostics.append(Diagnostic(f"method {self.method.name} is missing .end",
                                               self.method.header_line))
        self._close_class()

    def _close_class(self) -> None:
        if self.cls is not None:
            self.classes.append(self.cls)
            self.cls = None

    def _line(self, lineno: int, line: str) -> None:
        if self.method is not None:
            self._method_line(lineno, line)
        elif line.startswith(".class"):
            self._close_class()
            m = _CLASS.match(line)
            if not m:
                raise _LineError("malformed class header", expected=(".class Name [extends Super] [external]",))
            name, super_name = m.group(1), m.group(2)
            if super_name is None and name != OBJECT:
                super_name = OBJECT
            self.cls = _ClassBuilder(name, super_name, bool(m.group(3)), lineno)
        elif line.startswith(".field"):
            self._require_class(".field")
            m = _FIELD.match(line)
            if not m:
                raise _LineError("malformed field", expected=(".field [static] [public|private] type name",))
            self.cls.fields.append(FieldDef(m.group(4), _type(m.group(3)), bool(m.group(1)),
                                            m.group(2) or "private"))
        elif line.startswith(".method"):
            self._require_class(".method")
            m = _METHOD.match(line)
            if not m:
                raise _LineError("malformed method header", expected=(".method [static] ret name(params)",))
            params = m.group(4).replace(" ", "")
            descriptor = _descriptor(f"({params}){m.group(2)}")
            self.method = _MethodBuilder(self.cls.name, m.group(3), descriptor, bool(m.group(1)), lineno)
        elif line.startswith(".test"):
            self._close_class()
            m = _TEST.match(line)
            if not m:
                raise _LineError("malformed test", expected=('.test "name" Class.method expect ...',))
            self.tests.append(TestCase(m.group(1), MethodRef(m.group(2), m.group(3)),
                                       _expectation(m.group(4)), lineno))
        elif line.startswith(".equivalent"):
            m = _EQUIVALENT.match(line)
            if not m:
                raise _LineError("malformed equivalent declaration", expected=('.equivalent "PATCH-ID"',))
            self.equivalents.append(m.group(1))
        else:
            raise _LineError(f"unexpected {line.split()[0]!r} outside a method",
                             expected=(".class", ".field", ".method", ".test", ".equivalent"))

    def _require_class(self, what: str) -> None:
        if self.cls is None:
            raise _LineError(f"{what} outside a class")

    def _method_line(self, lineno: int, line: str) -> None:
        mb = self.method
        if line == ".end":
            self.cls.methods.append(mb.build())
            self.method = None
            return
        if line.startswith(".local"):
            m = _LOCAL.match(line)
            if not m:
                raise _LineError("malformed local", expected=(".local idx name type start|- end|-",))
            start = None if m.group(4) == "-" else m.group(4)
            end = None if m.group(5) == "-" else m.group(5)
            mb.locals.append(LocalSlot(int(m.group(1)), m.group(2), _type(m.group(3)), start, end))
            return
        if line.startswith("line ") or line == "line":
            parts = line.split()
            if len(parts) != 2:
                raise _LineError("line directive takes one number")
            mb.current_line = _int(parts[1])
            return
        source_line = mb.current_line if mb.current_line is not None else lineno
        m = _LINE_PREFIX.match(line)
        if m:
            source_line = int(m.group(1))
            line = line[m.end():].strip()
            if not line:
                raise _LineError("missing instruction after line prefix")
        m = _LABEL.match(line)
        if m and m.group(1) not in MNEMONICS:
            mb.body.append(Label(m.group(1)))
            mb.lines.append(source_line)
            line = m.group(2).strip()
            if not line:
                return
        mb.body.append(parse_instruction(line))
        mb.lines.append(source_line)


def parse(text: str, path: Optional[str] = None, check: bool = True) -> SourceUnit:
    """Parse an assembly unit; with `check` the resulting program must verify.

    Raises AsmSyntaxError carrying every syntax diagnostic found, or
    VerificationError for well-formed text describing an ill-typed program.
    """
    parser = _Parser(text)
    parser.run()
    names = [c.name for c in parser.classes]
    for c in parser.classes:
        if names.count(c.name) > 1:
            parser.diagnostics.append(Diagnostic(f"duplicate class {c.name}", c.line))
            names.remove(c.name)
    seen_tests = set()
    for t in parser.tests:
        if t.name in seen_tests:
            parser.diagnostics.append(Diagnostic(f"duplicate test {t.name!r}", t.source_line))
        seen_tests.add(t.name)
    if parser.diagnostics:
        raise AsmSyntaxError(sorted(parser.diagnostics, key=lambda d: d.line or 0))
    program = Program.of(c.build() for c in parser.classes)
    if check:
        verify_program(program)
    unit = SourceUnit(path, program, TestSuite(tuple(parser.tests)), tuple(parser.equivalents),
                      {c.name: c.line for c in parser.classes})
    logger.debug(f"parsed {unit.file_name}: {len(parser.classes)} classes, {len(parser.tests)} tests")
    return unit


def load(path, check: bool = True) -> SourceUnit:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path), check)
