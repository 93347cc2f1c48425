"""Generate-and-validate repair loop over the unpatched program's coverage."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import groupby
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from core.errors import ContractViolation, MvmError
from core.program import Program
from core.verifier import analyze_method
from faultloc.ochiai import SuspiciousnessRanking, rank_suite
from mutators.catalog import ALL_MUTATORS, generate_candidates, mask_name
from mutators.patch import MUTATOR_IDS, CandidatePatch, apply_patch
from testsuite.model import TestSuite
from testsuite.runner import DEFAULT_BASELINE_FUEL, FuelPolicy, SuiteRun, run_suite, run_test_on_patch

logger = logging.getLogger("repair")


class PatchStatus(Enum):
    SKIPPED_UNCOVERED = "skipped-uncovered"
    FALSIFIED_BY_FAILING = "falsified-by-failing"
    FALSIFIED_BY_PASSING = "falsified-by-passing"
    PLAUSIBLE = "plausible"


@dataclass(frozen=True)
class ValidationRecord:
    patch: CandidatePatch
    status: PatchStatus
    tests_executed: int
    suspiciousness: float
    killing_test: Optional[str] = None

    @property
    def validated(self) -> bool:
        return self.status is not PatchStatus.SKIPPED_UNCOVERED

    @property
    def plausible(self) -> bool:
        return self.status is PatchStatus.PLAUSIBLE


@dataclass(frozen=True)
class MutatorTally:
    generated: int = 0
    validated: int = 0
    plausible: int = 0

    @property
    def ratio(self) -> float:
        """Plausible over validated; 0 when nothing was validated."""
        return self.plausible / self.validated if self.validated else 0.0


@dataclass(frozen=True)
class RepairResult:
    subject: str
    mask: str
    fuel_policy: FuelPolicy
    failing_tests: Tuple[str, ...]
    passing_tests: Tuple[str, ...]
    records: Tuple[ValidationRecord, ...]
    ranking: Optional[SuspiciousnessRanking] = field(default=None, compare=False)

    @property
    def plausible(self) -> Tuple[ValidationRecord, ...]:
        return tuple(r for r in self.records if r.plausible)

    @property
    def generated_count(self) -> int:
        return len(self.records)

    @property
    def validated_count(self) -> int:
        return sum(1 for r in self.records if r.validated)

    @property
    def total_executions(self) -> int:
        return sum(r.tests_executed for r in self.records)

    @property
    def test_count(self) -> int:
        return len(self.failing_tests) + len(self.passing_tests)

    def tallies(self) -> Dict[str, MutatorTally]:
        counts = {mid: [0, 0, 0] for mid in MUTATOR_IDS}
        for r in self.records:
            c = counts[r.patch.mutator_id]
            c[0] += 1
            c[1] += r.validated
            c[2] += r.plausible
        return {mid: MutatorTally(*c) for mid, c in counts.items()}


def _check_patched(patched: Program, patch: CandidatePatch) -> None:
    method = patched.method_at(*patch.method_key)
    try:
        analyze_method(patched, method)
    except MvmError as exc:
        raise ContractViolation(f"patch {patch.patch_id} is not type-preserving: {exc}") from None


def validate_patch(program: Program, patch: CandidatePatch, run: SuiteRun,
                   policy: FuelPolicy = FuelPolicy(), suspiciousness: float = 0.0) -> ValidationRecord:
    """Validate one candidate, failing tests first, then the covering passing tests.

    A patch whose location is not covered by every failing test cannot make
    them all pass and is skipped without executing anything.
    """
    covering: FrozenSet[str] = run.matrix.cover(patch.location)
    if not run.failing_names <= covering:
        return ValidationRecord(patch, PatchStatus.SKIPPED_UNCOVERED, 0, suspiciousness)
    patched = apply_patch(program, patch)
    _check_patched(patched, patch)
    executed = 0
    for test in run.failing:
        executed += 1
        if not run_test_on_patch(patched, test, run.fuel_for(test, policy)):
            logger.debug(f"{patch.patch_id} falsified by failing test {test.name}")
            return ValidationRecord(patch, PatchStatus.FALSIFIED_BY_FAILING, executed, suspiciousness, test.name)
    for test in run.passing:
        if test.name not in covering:
            continue
        executed += 1
        if not run_test_on_patch(patched, test, run.fuel_for(test, policy)):
            logger.debug(f"{patch.patch_id} falsified by passing test {test.name}")
            return ValidationRecord(patch, PatchStatus.FALSIFIED_BY_PASSING, executed, suspiciousness, test.name)
    logger.debug(f"{patch.patch_id} is plausible after {executed} executions")
    return ValidationRecord(patch, PatchStatus.PLAUSIBLE, executed, suspiciousness)


def passes_all_tests(program: Program, patch: CandidatePatch, run: SuiteRun,
                     policy: FuelPolicy = FuelPolicy()) -> bool:
    """Unoptimized check: every test in the suite, no coverage skip, no early abort."""
    patched = apply_patch(program, patch)
    results = [run_test_on_patch(patched, t, run.fuel_for(t, policy)) for t in run.failing + run.passing]
    return all(results)


def validate_all(program: Program, candidates: Sequence[CandidatePatch], run: SuiteRun,
                 ranking: SuspiciousnessRanking, policy: FuelPolicy = FuelPolicy(),
                 jobs: int = 1) -> List[ValidationRecord]:
    """Validate in candidate order; with jobs > 1 results are merged back in that order."""
    def one(patch: CandidatePatch) -> ValidationRecord:
        return validate_patch(program, patch, run, policy, ranking.score_of(patch.location))

    for location, group in groupby(candidates, key=lambda p: p.location):
        logger.info(f"location {location}: {sum(1 for _ in group)} candidates "
                    f"(suspiciousness {ranking.score_of(location):.4f})")
    if jobs <= 1:
        return [one(p) for p in candidates]
    with ThreadPoolExecutor(max_workers=jobs) as executor:
        return list(executor.map(one, candidates))


def repair(program: Program, suite: TestSuite, mask: FrozenSet[str] = ALL_MUTATORS,
           policy: FuelPolicy = FuelPolicy(), jobs: int = 1,
           baseline_fuel: int = DEFAULT_BASELINE_FUEL, subject: str = "<memory>") -> RepairResult:
    """Fault localization, candidate generation and validation of every candidate.

    Raises NothingToRepair when no test fails on the unpatched program.
    """
    run = run_suite(program, suite, baseline_fuel)
    run.ensure_failing()
    ranking = rank_suite(run)
    candidates = generate_candidates(program, ranking, mask)
    records = validate_all(program, candidates, run, ranking, policy, jobs)
    result = RepairResult(subject, mask_name(mask), policy,
                          tuple(t.name for t in run.failing), tuple(t.name for t in run.passing),
                          tuple(records), ranking)
    logger.info(f"{subject}: {len(result.plausible)} plausible of {result.generated_count} generated, "
                f"{result.validated_count} validated, {result.total_executions} test executions")
    return result
