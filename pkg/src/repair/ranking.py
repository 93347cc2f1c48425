"""Ordering of plausible patches: suspiciousness first, then the mutator's plausible ratio."""

from dataclasses import dataclass
from typing import Dict, List, Sequence

from repair.engine import MutatorTally, RepairResult, ValidationRecord


@dataclass(frozen=True)
class RankedPatch:
    record: ValidationRecord
    rank: int


def assign_ranks(records: Sequence[ValidationRecord], tallies: Dict[str, MutatorTally]) -> List[RankedPatch]:
    """Sort by (suspiciousness desc, ratio asc); every member of a tie group gets its worst rank."""
    def key(r: ValidationRecord):
        return (-r.suspiciousness, tallies[r.patch.mutator_id].ratio)

    ordered = sorted(records, key=key)
    ranked: List[RankedPatch] = []
    start = 0
    while start < len(ordered):
        end = start
        while end + 1 < len(ordered) and key(ordered[end + 1]) == key(ordered[start]):
            end += 1
        ranked.extend(RankedPatch(r, end + 1) for r in ordered[start:end + 1])
        start = end + 1
    return ranked


def rank_patches(result: RepairResult) -> List[RankedPatch]:
    return assign_ranks(result.plausible, result.tallies())


def rank_validated(result: RepairResult) -> Dict[str, int]:
    """1-based position of each validated patch by suspiciousness, then generation order."""
    validated = [r for r in result.records if r.validated]
    ordered = sorted(validated, key=lambda r: -r.suspiciousness)
    return {r.patch.patch_id: k for k, r in enumerate(ordered, start=1)}
