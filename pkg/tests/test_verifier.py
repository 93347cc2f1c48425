import itertools

import pytest

from core.errors import ContractViolation, VerificationError
from core.instructions import Const, Descriptor, Return
from core.program import ClassDef, LocalSlot, MethodDef, Program
from core.types import BOOL, INT, NULL, OBJECT, VOID, default_value, join, ref, subtype_of, wrap_int
from core.verifier import analyze_method, check, verify

from conftest import all_fixtures


def _program(*classes):
    return Program.of(classes)


def _static_method(owner, name, ret, body, lines=None, params=(), locals_=()):
    lines = lines or tuple(range(1, len(body) + 1))
    return MethodDef(owner, name, Descriptor(tuple(params), ret), True, tuple(locals_), tuple(body), tuple(lines))


class TestTypes:
    def test_default_values(self):
        assert default_value(INT) == 0
        assert default_value(BOOL) is False
        assert default_value(ref("Foo")) is None

    def test_void_has_no_default(self):
        with pytest.raises(ContractViolation):
            default_value(VOID)

    def test_wrap_int_is_twos_complement(self):
        assert wrap_int((1 << 63)) == -(1 << 63)
        assert wrap_int(-(1 << 63) - 1) == (1 << 63) - 1
        assert wrap_int(42) == 42

    def test_subtype_follows_super_links(self):
        program = _program(ClassDef("A", OBJECT), ClassDef("B", "A"))
        assert subtype_of(ref("B"), ref("A"), program)
        assert subtype_of(ref("B"), ref(OBJECT), program)
        assert not subtype_of(ref("A"), ref("B"), program)
        assert subtype_of(NULL, ref("A"), program)
        assert not subtype_of(INT, BOOL, program)

    def test_join_finds_common_superclass(self):
        program = _program(ClassDef("A", OBJECT), ClassDef("B", "A"), ClassDef("C", "A"))
        assert join(ref("B"), ref("C"), program) == ref("A")
        assert join(NULL, ref("B"), program) == ref("B")
        assert join(INT, BOOL, program) is None

    @pytest.mark.parametrize("parents", list(itertools.product(*[range(k + 1) for k in range(4)])))
    def test_subtype_is_a_partial_order(self, parents):
        # class Ck extends Object when parents[k] == 0, else C(parents[k] - 1)
        names = [f"C{k}" for k in range(len(parents))]
        classes = [ClassDef(n, OBJECT if p == 0 else names[p - 1]) for n, p in zip(names, parents)]
        program = _program(*classes)
        tags = [INT, BOOL, VOID, NULL, ref(OBJECT)] + [ref(n) for n in names]
        below = {(a, b): subtype_of(a, b, program) for a in tags for b in tags}
        for a in tags:
            assert below[a, a]
        for a, b in itertools.product(tags, repeat=2):
            if below[a, b] and below[b, a]:
                assert a == b
        for a, b, c in itertools.product(tags, repeat=3):
            if below[a, b] and below[b, c]:
                assert below[a, c]


class TestVerify:
    def test_accepts_simple_method(self):
        m = _static_method("K", "one", INT, [Const(1), Return(INT)])
        assert verify(_program(ClassDef("K", OBJECT, methods=(m,)))).ok

    def test_rejects_return_type_mismatch(self):
        m = _static_method("K", "one", INT, [Const(True), Return(INT)], lines=(4, 5))
        result = verify(_program(ClassDef("K", OBJECT, methods=(m,))))
        assert not result.ok
        assert result.diagnostic.location.line == 5

    def test_rejects_falling_off_the_end(self):
        m = _static_method("K", "one", INT, [Const(1)])
        with pytest.raises(VerificationError):
            check(_program(ClassDef("K", OBJECT, methods=(m,))))

    def test_rejects_unknown_superclass(self):
        assert not verify(_program(ClassDef("K", "Missing"))).ok

    def test_rejects_dense_slot_violation(self):
        m = _static_method("K", "f", INT, [Const(1), Return(INT)], params=(INT,),
                           locals_=(LocalSlot(1, "x", INT),))
        assert not verify(_program(ClassDef("K", OBJECT, methods=(m,)))).ok

    def test_stack_shapes_per_index(self, parse_text):
        unit = parse_text("""
.class K
  .method static int f(int)
    load 0
    const 1
    arith add
    return int
  .end
""")
        method = unit.program.class_def("K").methods[0]
        stacks = analyze_method(unit.program, method)
        assert stacks == [(), (INT,), (INT, INT), (INT,)]

    def test_unreachable_code_has_no_stack(self, parse_text):
        unit = parse_text("""
.class K
  .method static int f()
    const 1
    return int
    const 2
    return int
  .end
""")
        stacks = analyze_method(unit.program, unit.program.class_def("K").methods[0])
        assert stacks[2] is None and stacks[3] is None

    def test_private_field_of_other_class_is_rejected(self, parse_text):
        text = """
.class A
  .field int secret
.class B
  .method static int peek(A)
    load 0
    getfield A.secret int
    return int
  .end
"""
        with pytest.raises(VerificationError):
            parse_text(text)

    @pytest.mark.parametrize("name", all_fixtures())
    def test_every_fixture_verifies(self, load_fixture, name):
        assert verify(load_fixture(name).program).ok


class TestCalls:
    BOX = """
.class Box
  .field public int size
  .method void <init>()
    return
  .end
  .method int get()
    load 0
    getfield Box.size int
    return int
  .end
  .method static int seed()
    const 3
    return int
  .end
"""

    def test_zero_argument_instance_call_keeps_the_stack(self, parse_text):
        unit = parse_text(self.BOX + """
.class Driver
  .method static int run()
    const 10
    new Box
    dup
    invoke Box.<init>()void
    invoke Box.get()int
    arith add
    return int
  .end
""")
        method = unit.program.class_def("Driver").methods[0]
        stacks = analyze_method(unit.program, method)
        box = ref("Box")
        assert stacks[4] == (INT, box)
        assert stacks[5] == (INT, INT)

    def test_zero_argument_static_call_keeps_the_stack(self, parse_text):
        unit = parse_text(self.BOX + """
.class Driver
  .method static int run()
    const 10
    invokestatic Box.seed()int
    arith add
    return int
  .end
""")
        stacks = analyze_method(unit.program, unit.program.class_def("Driver").methods[0])
        assert stacks == [(), (INT,), (INT, INT), (INT,)]

    def test_arith_on_int_and_bool_is_rejected(self, parse_text):
        with pytest.raises(VerificationError, match="arith add"):
            parse_text("""
.class K
  .method static int f()
    const 1
    const true
    arith add
    return int
  .end
""")

    def test_wrong_arity_descriptor_is_rejected(self, parse_text):
        with pytest.raises(VerificationError):
            parse_text(self.BOX + """
.class Driver
  .method static int run()
    const 1
    invokestatic Box.seed(int)int
    return int
  .end
""")
