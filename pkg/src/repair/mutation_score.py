"""Classic mutation testing: kill ratio of the generated mutants over a green suite."""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

from core.errors import ContractViolation
from core.program import Program
from mutators.catalog import ALL_MUTATORS, generate_candidates
from mutators.patch import apply_patch
from testsuite.model import TestSuite
from testsuite.runner import DEFAULT_BASELINE_FUEL, FuelPolicy, run_suite, run_test_on_patch

logger = logging.getLogger("repair")


@dataclass(frozen=True)
class MutantOutcome:
    patch_id: str
    killed: bool
    killing_test: str = ""


@dataclass(frozen=True)
class MutationScore:
    killed: int
    total: int
    equivalent: int
    outcomes: Tuple[MutantOutcome, ...] = ()

    def __post_init__(self):
        if self.total <= self.equivalent:
            raise ContractViolation("every mutant is declared equivalent; the score is undefined")

    @property
    def score(self) -> float:
        return self.killed / (self.total - self.equivalent)

    @property
    def survived(self) -> Tuple[str, ...]:
        return tuple(o.patch_id for o in self.outcomes if not o.killed)


def mutation_score(program: Program, suite: TestSuite, mask: FrozenSet[str] = ALL_MUTATORS,
                   equivalents: Iterable[str] = (), policy: FuelPolicy = FuelPolicy(),
                   baseline_fuel: int = DEFAULT_BASELINE_FUEL) -> MutationScore:
    """Mutate every covered line; a mutant is killed when a covering test fails on it.

    Parameters:
    - equivalents: patch ids declared equivalent (never killable)

    Returns:
    - MutationScore with killed / (total - equivalent)
    """
    run = run_suite(program, suite, baseline_fuel)
    if run.failing:
        raise ContractViolation(
            f"mutation score needs a passing suite; failing: {', '.join(t.name for t in run.failing)}")
    mutants = generate_candidates(program, run.matrix.all_locations(), mask)
    declared = set(equivalents)
    outcomes = []
    equivalent = 0
    for patch in mutants:
        covering = run.matrix.cover(patch.location)
        patched = apply_patch(program, patch)
        killer = next((t.name for t in run.passing
                       if t.name in covering and not run_test_on_patch(patched, t, run.fuel_for(t, policy))), "")
        outcomes.append(MutantOutcome(patch.patch_id, bool(killer), killer))
        if patch.patch_id in declared:
            if killer:
                logger.warning(f"mutant {patch.patch_id} is declared equivalent but {killer} kills it")
            else:
                equivalent += 1
    unknown = declared - {p.patch_id for p in mutants}
    if unknown:
        logger.warning(f"equivalent declarations match no mutant: {', '.join(sorted(unknown))}")
    killed = sum(1 for o in outcomes if o.killed)
    result = MutationScore(killed, len(outcomes), equivalent, tuple(outcomes))
    logger.info(f"mutation score {result.score:.4f} ({killed} killed, {len(outcomes)} mutants, {equivalent} equivalent)")
    return result
