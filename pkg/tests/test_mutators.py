import pytest

from conftest import all_fixtures, fixture_path
from asm.parser import load
from core.errors import ConfigurationError
from core.instructions import (
    Arith, Cmp, Const, Descriptor, Dup, GetField, Inc, Invoke, Jmp, JmpIf, Label, Load, Pop, PutField,
    Return, Store, Swap, Switch,
)
from core.program import Location
from core.types import INT, ref
from core.verifier import analyze_method
from mutators.catalog import (
    ALL_MUTATORS, MUTATOR_NAMES, ORIGINAL_MUTATORS, count_by_mutator, generate_candidates, mask_name,
    mutate_location, parse_mask,
)
from mutators.context import MethodContext
from mutators.patch import MUTATOR_IDS, apply_patch, patched_method

ITEM = ref("Item")


@pytest.fixture(scope="module")
def catalog():
    return load(fixture_path("mutator_catalog.mvm")).program


def _at(program, class_name, method_name, descriptor, line, mask=ALL_MUTATORS):
    method = program.method_at(class_name, method_name, descriptor)
    ctx = MethodContext(program, method)
    return mutate_location(ctx, Location(class_name, method_name, descriptor, line), mask)


def _replacements(patches, mutator_id):
    return [p.replacement for p in patches if p.mutator_id == mutator_id]


def _project_locations(program):
    found = []
    for cdef in program.project_classes():
        for m in cdef.methods:
            for line in sorted(set(m.lines)):
                found.append(Location(cdef.name, m.name, str(m.descriptor), line))
    return found


def test_arithmetic_operator(catalog):
    patches = _at(catalog, "Sites", "add", "(int,int)int", 10)
    ao = [p for p in patches if p.mutator_id == "AO"]
    assert len(ao) == 12
    sub = next(p for p in ao if p.replacement == (Arith("sub"),))
    assert sub.description == "Replaced integer addition with subtraction"
    assert (Pop(),) in _replacements(ao, "AO")
    assert (Swap(), Pop()) in _replacements(ao, "AO")


def test_increments(catalog):
    patches = _at(catalog, "Sites", "bump", "(int)int", 20)
    assert _replacements(patches, "IS") == [(Inc(0, -1),), ()]
    assert patches[0].description == "Changed increment from 1 to -1"


def test_inline_constant(catalog):
    patches = _at(catalog, "Sites", "zero", "()int", 30)
    assert _replacements(patches, "IC") == [(Const(-1),), (Const(1),)]
    assert [p.description for p in patches if p.mutator_id == "IC"] == ["Substituted 0 with -1", "Substituted 0 with 1"]


def test_invert_negatives(catalog):
    patches = _at(catalog, "Sites", "negate", "(int)int", 40)
    assert _replacements(patches, "IN") == [()]


def test_return_value(catalog):
    patches = _at(catalog, "Sites", "ident", "(int)int", 50)
    rv = _replacements(patches, "RV")
    assert len(rv) == 3
    assert rv[0] == (Pop(), Const(0), Return(INT))
    assert rv[1] == (Const(1), Arith("add"), Return(INT))


def test_call_site_family(catalog):
    patches = _at(catalog, "Sites", "call", "(Item,int)int", 60)
    m_int = Invoke("Item", "m", Descriptor.parse("(int)int"))
    assert _replacements(patches, "MC") == [(Pop(), Pop(), Const(0))]
    assert _replacements(patches, "AP") == [(Swap(), Pop())]
    assert (Store(3), Dup(), Const(None), Cmp("ne"), JmpIf("M0"), Pop(), Const(0), Jmp("M1"), Label("M0"),
            Load(3), m_int, Label("M1")) in _replacements(patches, "MG")
    names = {r[0].name for r in _replacements(patches, "MN")}
    assert names == {"m1", "m2"}
    mg = [p for p in patches if p.mutator_id == "MG"]
    assert all(p.extra_locals and p.extra_locals[0].index == 3 for p in mg)


def test_argument_list_overloads(catalog):
    widened = _at(catalog, "Sites", "call", "(Item,int)int", 60)
    assert _replacements(widened, "AL") == [
        (Store(3), Load(3), Load(1), Invoke("Item", "m", Descriptor.parse("(int,int)int")))]
    narrowed = _at(catalog, "Sites", "callPair", "(Item,int,int)int", 70)
    assert _replacements(narrowed, "AL") == [
        (Store(4), Store(3), Load(3), Invoke("Item", "m", Descriptor.parse("(int)int")))]


def test_constructor_call(catalog):
    patches = _at(catalog, "Sites", "make", "()Item", 80)
    cc = [p for p in patches if p.mutator_id == "CC"]
    assert len(cc) == 1
    assert (cc[0].start, cc[0].end, cc[0].replacement) == (0, 3, (Const(None),))
    assert cc[0].description == "removed call to Item::<init>, replaced with null"


def test_member_variable(catalog):
    patches = _at(catalog, "Sites", "setCount", "(int)void", 90)
    assert _replacements(patches, "MV") == [(Pop(), Const(0), PutField("Sites", "count", INT))]


def test_switch(catalog):
    patches = _at(catalog, "Sites", "pick", "(int)int", 100)
    sw = _replacements(patches, "SW")
    assert sw[0] == (Switch(((1, "DEF"),), "ONE"),)
    assert len(sw) == 2


def test_case_breaker(catalog):
    patches = _at(catalog, "Sites", "classify", "(int)int", 110)
    cb = [p for p in patches if p.mutator_id == "CB"]
    first = cb[0]
    assert (first.start, first.end) == (5, 6)
    assert first.replacement == (Const(0), Return(INT))
    assert first.description == "case 1: return 0 after the case body"
    # case 2 falls through into the default: the return is inserted, nothing replaced
    assert any(p.start == p.end == 9 for p in cb)
    assert len(cb) == 6


BYPASSED_CASE = """
.class K
  .method static int f(int)
    .local 0 x int - -
    line 10
    load 0
    const 0
    cmp lt
    jmpif NEG
    line 11
    load 0
    switch 1:ONE 2:NEG default:DEF
    line 12
ONE: const 1
    store 0
    jmp DEF
    line 13
NEG: const 2
    store 0
    line 14
DEF: load 0
    return int
  .end
"""


def test_case_breaker_needs_the_switch_to_dominate_the_case(parse_text):
    program = parse_text(BYPASSED_CASE).program
    cb = [p for p in _at(program, "K", "f", "(int)int", 11) if p.mutator_id == "CB"]
    assert cb
    assert all(p.description.startswith("case 1:") for p in cb)


def test_conditional(catalog):
    patches = _at(catalog, "Sites", "max", "(int,int)int", 120)
    co = [p for p in patches if p.mutator_id == "CO"]
    assert len(co) == 8
    ge = next(p for p in co if p.replacement == (Cmp("ge"),))
    assert ge.description == "changed relational operator > to >="


def test_field_read_family(catalog):
    patches = _at(catalog, "Sites", "read", "(Item)int", 130)
    f1 = GetField("Item", "f1", INT)
    assert (Dup(), Const(None), Cmp("ne"), JmpIf("M0"), Pop(), Const(0), Jmp("M1"), Label("M0"), f1,
            Label("M1")) in _replacements(patches, "DG")
    assert _replacements(patches, "FN") == [(GetField("Item", "f2", INT),)]
    am = _replacements(patches, "AM")
    assert (Invoke("Item", "getF", Descriptor.parse("()int")),) in am
    assert (Pop(), Load(1)) in am


def test_entry_precondition(catalog):
    patches = _at(catalog, "Sites", "lookup", "(Item)int", 140)
    entry = [p for p in patches if p.mutator_id == "PC" and p.start == p.end == 0]
    assert len(entry) == 1
    assert entry[0].replacement == (Load(1), Const(None), Cmp("eq"), JmpIf("M0"), Jmp("M1"), Label("M0"),
                                    Const(0), Return(INT), Label("M1"))
    assert entry[0].description == "added precondition: n == null ? return default"


def test_result_guard(catalog):
    patches = _at(catalog, "Sites", "follow", "(Item)Item", 150)
    next_call = Invoke("Item", "next", Descriptor.parse("()Item"))
    guards = [r for r in _replacements(patches, "PC") if r and r[0] == next_call]
    assert guards
    assert guards[0][1:5] == (Dup(), Const(None), Cmp("ne"), JmpIf("M0"))
    assert guards[0][-3:] == (Const(None), Return(ITEM), Label("M0"))


def test_local_variable(catalog):
    patches = _at(catalog, "Sites", "copy", "(int,int)int", 160)
    lv = [p for p in patches if p.mutator_id == "LV"]
    assert lv[0].replacement == (Load(1),)
    assert lv[0].description == "replaced local variable y with z"


def test_method_name(catalog):
    patches = _at(catalog, "Sites", "callM1", "(Item,int)int", 170)
    assert {r[0].name for r in _replacements(patches, "MN")} == {"m", "m2"}


def test_every_mutator_fires(catalog):
    candidates = generate_candidates(catalog, _project_locations(catalog))
    counts = count_by_mutator(candidates)
    assert set(counts) == set(MUTATOR_IDS)
    assert all(counts[mid] >= 1 for mid in MUTATOR_IDS), counts


def test_ordinals_count_per_mutator(catalog):
    patches = _at(catalog, "Sites", "call", "(Item,int)int", 60)
    for mid in MUTATOR_IDS:
        ordinals = [p.ordinal for p in patches if p.mutator_id == mid]
        assert ordinals == list(range(len(ordinals)))


def test_original_mask_limits_families(catalog):
    patches = _at(catalog, "Sites", "read", "(Item)int", 130, ORIGINAL_MUTATORS)
    assert {p.mutator_id for p in patches} <= ORIGINAL_MUTATORS
    everything = _at(catalog, "Sites", "read", "(Item)int", 130)
    assert any(p.mutator_id == "DG" for p in everything)
    assert not any(p.mutator_id == "DG" for p in patches)


def test_generation_is_deterministic(catalog):
    locations = _project_locations(catalog)
    first = generate_candidates(catalog, locations)
    second = generate_candidates(catalog, locations)
    assert first == second
    assert len({p.patch_id for p in first}) == len(first)


def test_patches_change_the_method(catalog):
    for patch in generate_candidates(catalog, _project_locations(catalog)):
        method = catalog.method_at(*patch.method_key)
        assert patched_method(method, patch).body != method.body, patch.patch_id


@pytest.mark.parametrize("name", all_fixtures())
def test_candidates_are_type_preserving(load_fixture, name):
    program = load_fixture(name).program
    for patch in generate_candidates(program, _project_locations(program)):
        patched = apply_patch(program, patch)
        stacks = analyze_method(patched, patched.method_at(*patch.method_key))
        assert stacks[0] is not None, patch.patch_id


def test_parse_mask():
    assert parse_mask("all") == ALL_MUTATORS
    assert parse_mask("Original") == ORIGINAL_MUTATORS
    assert parse_mask("ic, co") == frozenset({"IC", "CO"})
    assert mask_name(parse_mask("co,ic")) == "IC,CO"
    assert mask_name(ORIGINAL_MUTATORS) == "original"
    assert len(ORIGINAL_MUTATORS) == 11
    assert set(MUTATOR_NAMES) == set(MUTATOR_IDS)


@pytest.mark.parametrize("text", ["", "XX", "IC,XX", " , "])
def test_parse_mask_rejects(text):
    with pytest.raises(ConfigurationError):
        parse_mask(text)
