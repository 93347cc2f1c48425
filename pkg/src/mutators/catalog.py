"""The mutator catalog: masks, display names and ordered candidate generation."""

import logging
from collections import Counter
from typing import Dict, FrozenSet, Iterable, List, Tuple

from core.errors import ConfigurationError
from core.program import Location, Program
from mutators.arith import mutate_arith
from mutators.conditionals import mutate_conditionals
from mutators.context import MethodContext
from mutators.guards import mutate_guards
from mutators.patch import MUTATOR_IDS, CandidatePatch
from mutators.references import mutate_references
from mutators.returns import mutate_returns

logger = logging.getLogger(__name__)

MUTATOR_NAMES: Dict[str, str] = {
    "AP": "ARGUMENT PROPAGATION",
    "RV": "RETURN VALUE",
    "CC": "CONSTRUCTOR CALL",
    "IS": "INCREMENTS",
    "IC": "INLINE CONSTANT",
    "MV": "MEMBER VARIABLE",
    "SW": "SWITCH",
    "MC": "METHOD CALL",
    "IN": "INVERT NEGATIVES",
    "AO": "ARITHMETIC OPERATOR",
    "CO": "CONDITIONAL",
    "DG": "DEREFERENCE GUARD",
    "MG": "METHOD GUARD",
    "PC": "PRE/POST-CONDITION",
    "FN": "FIELD NAME",
    "MN": "METHOD NAME",
    "AL": "ARGUMENT LIST",
    "LV": "LOCAL VARIABLE",
    "AM": "ACCESSOR",
    "CB": "CASE BREAKER",
}

ORIGINAL_MUTATORS: FrozenSet[str] = frozenset({"AP", "RV", "CC", "IS", "IC", "MV", "SW", "MC", "IN", "AO", "CO"})
ALL_MUTATORS: FrozenSet[str] = frozenset(MUTATOR_IDS)

# family order within a location
FAMILIES = (mutate_arith, mutate_returns, mutate_conditionals, mutate_guards, mutate_references)


def parse_mask(text: str) -> FrozenSet[str]:
    """`original`, `all`, or a comma-separated list of mutator ids."""
    value = text.strip()
    if value.lower() == "original":
        return ORIGINAL_MUTATORS
    if value.lower() == "all":
        return ALL_MUTATORS
    ids = [part.strip().upper() for part in value.split(",") if part.strip()]
    unknown = [i for i in ids if i not in ALL_MUTATORS]
    if not ids or unknown:
        raise ConfigurationError(f"unknown mutator mask {text!r}")
    return frozenset(ids)


def mask_name(mask: FrozenSet[str]) -> str:
    if mask == ALL_MUTATORS:
        return "all"
    if mask == ORIGINAL_MUTATORS:
        return "original"
    return ",".join(i for i in MUTATOR_IDS if i in mask)


def mutate_location(ctx: MethodContext, location: Location, mask: FrozenSet[str] = ALL_MUTATORS) -> List[CandidatePatch]:
    """Every patch for one location, family by family, numbered per mutator."""
    patches: List[CandidatePatch] = []
    ordinals: Counter = Counter()
    for family in FAMILIES:
        for patch in family(ctx, location):
            if patch.mutator_id not in mask:
                continue
            patches.append(patch.numbered(ordinals[patch.mutator_id]))
            ordinals[patch.mutator_id] += 1
    return patches


def _locations(ranking) -> Tuple[Location, ...]:
    if hasattr(ranking, "locations"):
        return ranking.locations()
    return tuple(ranking)


def generate_candidates(program: Program, ranking, mask: FrozenSet[str] = ALL_MUTATORS) -> List[CandidatePatch]:
    """Candidates for every ranked location, in ranking order.

    Parameters:
    - program: verified subject program
    - ranking: SuspiciousnessRanking or an iterable of Locations
    - mask: mutator ids to keep

    Returns:
    - deterministic list of CandidatePatch
    """
    contexts: Dict[Tuple[str, str, str], MethodContext] = {}
    candidates: List[CandidatePatch] = []
    locations = _locations(ranking)
    for location in locations:
        if program.class_def(location.class_name).external:
            continue
        ctx = contexts.get(location.method_key)
        if ctx is None:
            method = program.method_at(*location.method_key)
            ctx = contexts[location.method_key] = MethodContext(program, method)
        found = mutate_location(ctx, location, mask)
        logger.debug(f"{location}: {len(found)} candidates")
        candidates.extend(found)
    logger.info(f"generated {len(candidates)} candidates over {len(locations)} locations (mask {mask_name(mask)})")
    return candidates


def count_by_mutator(patches: Iterable[CandidatePatch]) -> Dict[str, int]:
    counts = Counter(p.mutator_id for p in patches)
    return {mid: counts.get(mid, 0) for mid in MUTATOR_IDS}
