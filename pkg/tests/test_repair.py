import numpy as np
import pytest

from conftest import fixture_path, repair_fixtures
from asm.parser import load
from core.errors import ConfigurationError, NothingToRepair
from core.program import Location
from mutators.catalog import ALL_MUTATORS, ORIGINAL_MUTATORS
from mutators.patch import CandidatePatch
from repair.engine import MutatorTally, PatchStatus, ValidationRecord, passes_all_tests, repair
from repair.ranking import assign_ranks, rank_patches, rank_validated
from repair.results import RESULT_VERSION, dump_result, load_result
from testsuite.runner import FuelPolicy, run_suite


def _repair(name, mask=ALL_MUTATORS, jobs=1):
    unit = load(fixture_path(name))
    return unit, repair(unit.program, unit.tests, mask, jobs=jobs, subject=name)


def _ranks(result):
    return {rp.record.patch.patch_id: rp.rank for rp in rank_patches(result)}


@pytest.mark.parametrize("mask", [ALL_MUTATORS, ORIGINAL_MUTATORS], ids=["all", "original"])
@pytest.mark.parametrize("name", repair_fixtures())
def test_plausible_set_matches_exhaustive_validation(name, mask):
    unit, result = _repair(name, mask)
    run = run_suite(unit.program, unit.tests)
    for record in result.records:
        assert record.plausible == passes_all_tests(unit.program, record.patch, run), record.patch.patch_id


@pytest.mark.parametrize("name", repair_fixtures())
def test_record_invariants(name):
    _, result = _repair(name)
    assert result.failing_tests
    for r in result.records:
        if r.status is PatchStatus.SKIPPED_UNCOVERED:
            assert r.tests_executed == 0
        else:
            assert 1 <= r.tests_executed <= result.test_count
        if r.status is PatchStatus.FALSIFIED_BY_FAILING:
            assert r.killing_test in result.failing_tests
            assert r.tests_executed <= len(result.failing_tests)
        elif r.status is PatchStatus.FALSIFIED_BY_PASSING:
            assert r.killing_test in result.passing_tests
            assert r.tests_executed > len(result.failing_tests)
        else:
            assert r.killing_test is None
        if r.plausible:
            assert r.tests_executed >= len(result.failing_tests)
    assert result.validated_count <= result.generated_count
    assert result.total_executions <= result.generated_count * result.test_count


def test_validation_skips_most_executions():
    _, result = _repair("economy_tax.mvm")
    assert result.generated_count >= 100
    assert result.total_executions <= 0.5 * result.generated_count * result.test_count


def test_lang10_analog():
    _, result = _repair("lang10_analog.mvm")
    assert result.generated_count == 9
    assert result.validated_count == 9
    assert result.total_executions == 14
    assert _ranks(result) == {
        "CO:Lexer.weight(int)int:307:1": 1,
        "MC:Lexer.weight(int)int:307:0": 2,
    }
    validated = rank_validated(result)
    assert validated["CO:Lexer.weight(int)int:307:1"] == 8
    assert validated["MC:Lexer.weight(int)int:307:0"] == 6
    tallies = result.tallies()
    assert tallies["RV"] == MutatorTally(3, 3, 0)
    assert tallies["IC"] == MutatorTally(2, 2, 0)
    assert tallies["MC"] == MutatorTally(1, 1, 1)
    assert tallies["CO"] == MutatorTally(3, 3, 1)


def test_time19_analog():
    _, result = _repair("time19_analog.mvm")
    assert result.generated_count == 16
    assert result.total_executions == 26
    assert _ranks(result) == {
        "CO:DateTimeZone.sign(int)int:10:1": 1,
        "IC:DateTimeZone.sign(int)int:10:0": 2,
    }


def test_closure86_analog():
    _, result = _repair("closure86_analog.mvm")
    ids = {r.patch.patch_id for r in result.plausible}
    assert "RV:NodeUtil.evaluatesToLocalValue(int)bool:43:0" in ids
    record = next(r for r in result.plausible if r.patch.patch_id == "RV:NodeUtil.evaluatesToLocalValue(int)bool:43:0")
    assert record.patch.description == "replaced boolean return with (true == false ? true : false)"


def test_two_faults_are_never_validated():
    _, result = _repair("seeded_two_faults.mvm")
    assert len(result.failing_tests) == 2
    assert result.generated_count > 0
    assert result.total_executions == 0
    assert result.plausible == ()
    assert all(r.status is PatchStatus.SKIPPED_UNCOVERED for r in result.records)


def test_green_suite_has_nothing_to_repair():
    unit = load(fixture_path("mutation_score.mvm"))
    with pytest.raises(NothingToRepair):
        repair(unit.program, unit.tests)


@pytest.mark.parametrize("name", repair_fixtures())
def test_runs_are_reproducible(name):
    _, first = _repair(name)
    _, again = _repair(name)
    _, parallel = _repair(name, jobs=4)
    assert dump_result(again) == dump_result(first)
    assert dump_result(parallel) == dump_result(first)
    assert parallel == first


def test_fuel_policy_is_recorded():
    unit = load(fixture_path("lang10_analog.mvm"))
    policy = FuelPolicy(multiplier=3, floor=50)
    result = repair(unit.program, unit.tests, policy=policy)
    assert result.fuel_policy == policy
    assert {r.patch.patch_id for r in result.plausible} == {
        "CO:Lexer.weight(int)int:307:1", "MC:Lexer.weight(int)int:307:0"}


def _record(mutator_id, suspiciousness, line):
    patch = CandidatePatch(mutator_id, Location("K", "m", "()int", line), 0, 1, (), "d")
    return ValidationRecord(patch, PatchStatus.PLAUSIBLE, 1, suspiciousness)


def test_assign_ranks_properties():
    rng = np.random.default_rng(11)
    ids = ["AO", "CO", "RV", "IC"]
    for _ in range(50):
        tallies = {mid: MutatorTally(10, 10, int(rng.integers(0, 11))) for mid in ids}
        records = [_record(ids[int(rng.integers(0, 4))], float(rng.choice([0.25, 0.5, 1.0])), k)
                   for k in range(int(rng.integers(1, 12)))]
        ranked = assign_ranks(records, tallies)
        assert len(ranked) == len(records)
        key = {id(rp.record): (-rp.record.suspiciousness, tallies[rp.record.patch.mutator_id].ratio)
               for rp in ranked}
        ranks = [rp.rank for rp in ranked]
        assert ranks == sorted(ranks)
        for rp in ranked:
            k = key[id(rp.record)]
            assert rp.rank == sum(1 for other in ranked if key[id(other.record)] <= k)
        for a in ranked:
            for b in ranked:
                if a.record.suspiciousness > b.record.suspiciousness:
                    assert a.rank < b.rank


def test_lower_ratio_ranks_first_within_a_suspiciousness():
    tallies = {"CO": MutatorTally(8, 8, 1), "IC": MutatorTally(5, 5, 1)}
    ranked = assign_ranks([_record("IC", 0.5, 1), _record("CO", 0.5, 2)], tallies)
    assert [(rp.record.patch.mutator_id, rp.rank) for rp in ranked] == [("CO", 1), ("IC", 2)]


def test_ties_share_the_worst_rank():
    tallies = {"CO": MutatorTally(2, 2, 1)}
    ranked = assign_ranks([_record("CO", 0.5, 1), _record("CO", 0.5, 2), _record("CO", 0.2, 3)], tallies)
    assert [rp.rank for rp in ranked] == [2, 2, 3]


def test_result_file_round_trip():
    _, result = _repair("lang10_analog.mvm")
    text = dump_result(result)
    loaded = load_result(text)
    assert loaded.header["version"] == RESULT_VERSION
    assert loaded.header["generated"] == 9
    assert loaded.header["executions"] == 14
    assert [r["patch_id"] for r in loaded.plausible()] == [
        "CO:Lexer.weight(int)int:307:1", "MC:Lexer.weight(int)int:307:0"]
    assert len(loaded.records) == 9
    assert {t["mutator"] for t in loaded.tallies} == {"RV", "IC", "MC", "CO"}
    assert dump_result(result) == text


def test_result_file_version_is_checked():
    with pytest.raises(ConfigurationError):
        load_result('{"kind": "header", "version": 999}\n')
    with pytest.raises(ConfigurationError):
        load_result("")
