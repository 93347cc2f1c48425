"""Ochiai suspiciousness over the per-line coverage spectrum."""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, Tuple

import numpy as np

from core.errors import ContractViolation
from core.program import Location
from testsuite.runner import CoverageMatrix

logger = logging.getLogger(__name__)


def ochiai(ef: int, ep: int, total_failing: int) -> float:
    """ef / sqrt(total_failing * (ef + ep)); 0 when no failing test covers the line."""
    if total_failing <= 0:
        raise ContractViolation("ochiai needs at least one failing test")
    if ef > total_failing or ef < 0 or ep < 0:
        raise ContractViolation(f"inconsistent tallies ef={ef} ep={ep} tf={total_failing}")
    if ef == 0:
        return 0.0
    return ef / math.sqrt(total_failing * (ef + ep))


def ochiai_scores(ef: np.ndarray, ep: np.ndarray, total_failing: int) -> np.ndarray:
    """Vectorized ochiai over tally arrays."""
    if total_failing <= 0:
        raise ContractViolation("ochiai needs at least one failing test")
    ef = np.asarray(ef, dtype=np.float64)
    ep = np.asarray(ep, dtype=np.float64)
    denominator = np.sqrt(total_failing * (ef + ep))
    scores = np.zeros_like(ef)
    covered = ef > 0
    scores[covered] = ef[covered] / denominator[covered]
    return scores


@dataclass(frozen=True)
class RankedLocation:
    location: Location
    score: float
    ef: int
    ep: int


@dataclass(frozen=True)
class SuspiciousnessRanking:
    entries: Tuple[RankedLocation, ...]
    total_failing: int
    _scores: Dict[Location, float] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._scores.update({e.location: e.score for e in self.entries})

    def __iter__(self) -> Iterator[RankedLocation]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def locations(self) -> Tuple[Location, ...]:
        return tuple(e.location for e in self.entries)

    def score_of(self, location: Location) -> float:
        return self._scores.get(location, 0.0)


def _tie_key(location: Location):
    return (location.class_name, location.method_name, location.line, location.descriptor)


def rank_locations(matrix: CoverageMatrix, failing: Iterable[str], passing: Iterable[str]) -> SuspiciousnessRanking:
    """Score every line covered by a failing test, most suspicious first.

    Parameters:
    - matrix: coverage of the unpatched program
    - failing / passing: test names of each partition

    Returns:
    - SuspiciousnessRanking, ties ordered by (class, method, line)
    """
    failing = list(failing)
    passing = list(passing)
    candidates = sorted({loc for name in failing for loc in matrix.locations_of(name)}, key=_tie_key)
    ef = np.array([sum(matrix.covers(t, loc) for t in failing) for loc in candidates], dtype=np.int64)
    ep = np.array([sum(matrix.covers(t, loc) for t in passing) for loc in candidates], dtype=np.int64)
    scores = ochiai_scores(ef, ep, len(failing)) if candidates else np.zeros(0)
    # stable sort keeps the lexicographic tie order
    order = np.argsort(-scores, kind="stable")
    entries = tuple(
        RankedLocation(candidates[i], float(scores[i]), int(ef[i]), int(ep[i])) for i in order
    )
    logger.info(f"fault localization: {len(entries)} suspicious lines")
    return SuspiciousnessRanking(entries, len(failing))


def rank_suite(run) -> SuspiciousnessRanking:
    """rank_locations over a SuiteRun's partitions."""
    return rank_locations(run.matrix, (t.name for t in run.failing), (t.name for t in run.passing))
