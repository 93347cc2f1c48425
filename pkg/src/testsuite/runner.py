"""Suite execution on the unpatched program and single-test execution on patches."""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Tuple

from core.errors import ConfigurationError, NothingToRepair
from core.program import Location, Program
from testsuite.model import TestCase, TestSuite
from vm.interpreter import ExecOutcome, execute

logger = logging.getLogger(__name__)

DEFAULT_BASELINE_FUEL = 1_000_000


@dataclass(frozen=True)
class FuelPolicy:
    """Per-test budget: `multiplier` times the unpatched run's steps, never below `floor`."""
    multiplier: int = 10
    floor: int = 10_000

    def __post_init__(self):
        if self.multiplier < 1 or self.floor < 1:
            raise ConfigurationError("fuel multiplier and floor must be positive")

    def budget(self, baseline_steps: int) -> int:
        return max(self.floor, self.multiplier * baseline_steps)


@dataclass(frozen=True)
class CoverageMatrix:
    """Project source lines each test executes."""
    covered: Dict[str, FrozenSet[Location]] = field(default_factory=dict)

    def locations_of(self, test_name: str) -> FrozenSet[Location]:
        return self.covered.get(test_name, frozenset())

    def cover(self, location: Location) -> FrozenSet[str]:
        return frozenset(name for name, locs in self.covered.items() if location in locs)

    def covers(self, test_name: str, location: Location) -> bool:
        return location in self.locations_of(test_name)

    def all_locations(self) -> Tuple[Location, ...]:
        seen = set()
        for locs in self.covered.values():
            seen.update(locs)
        return tuple(sorted(seen))


@dataclass(frozen=True)
class SuiteRun:
    failing: Tuple[TestCase, ...]
    passing: Tuple[TestCase, ...]
    matrix: CoverageMatrix
    baseline_steps: Dict[str, int]
    outcomes: Dict[str, ExecOutcome]

    def ensure_failing(self) -> None:
        if not self.failing:
            raise NothingToRepair("nothing to repair: every test passes")

    def fuel_for(self, test: TestCase, policy: FuelPolicy) -> int:
        return policy.budget(self.baseline_steps[test.name])

    @property
    def failing_names(self) -> FrozenSet[str]:
        return frozenset(t.name for t in self.failing)


def project_locations(trace: Iterable[Location], project: FrozenSet[str]) -> FrozenSet[Location]:
    return frozenset(loc for loc in trace if loc.class_name in project)


def run_suite(program: Program, suite: TestSuite, baseline_fuel: int = DEFAULT_BASELINE_FUEL) -> SuiteRun:
    """Execute every test with tracing on and partition the suite.

    Parameters:
    - program: verified subject program
    - suite: tests in declaration order
    - baseline_fuel: budget for each unpatched run

    Returns:
    - SuiteRun with failing/passing partitions (declaration order), coverage and step counts
    """
    project = frozenset(c.name for c in program.project_classes())
    failing, passing = [], []
    covered, steps, outcomes = {}, {}, {}
    for test in suite:
        outcome = execute(program, test.entry, baseline_fuel, trace=True)
        covered[test.name] = project_locations(outcome.trace, project)
        steps[test.name] = outcome.instructions_executed
        outcomes[test.name] = outcome
        if test.passes(outcome):
            passing.append(test)
        else:
            failing.append(test)
            logger.debug(f"test {test.name} fails on the unpatched program: {outcome}, expected {test.expectation}")
    logger.info(f"suite: {len(failing)} failing, {len(passing)} passing")
    return SuiteRun(tuple(failing), tuple(passing), CoverageMatrix(covered), steps, outcomes)


def run_test_on_patch(patched: Program, test: TestCase, fuel: int) -> bool:
    """True iff the test passes on the patched program (no trace)."""
    return test.passes(execute(patched, test.entry, fuel))
