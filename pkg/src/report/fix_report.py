"""Plain-text fix reports and their tab-separated variant."""

import difflib
from datetime import datetime
from typing import Callable, List, Optional, Sequence, Tuple

from asm.render import render_method
from core.program import Program
from mutators.catalog import MUTATOR_NAMES
from mutators.patch import CandidatePatch, patched_method
from repair.engine import RepairResult
from repair.ranking import rank_patches, rank_validated
from repair.results import ResultFile

TOOL_NAME = "MVM-Repair"
RULE = "=" * 48
ENTRY_SEPARATOR = "-" * 11


def wall_clock() -> str:
    return datetime.now().strftime("%a %b %d %H:%M:%S %Y")


def fixed_clock(timestamp: str) -> Callable[[], str]:
    return lambda: timestamp


def render_patch_diff(program: Program, patch: CandidatePatch) -> List[str]:
    """The enclosing method before and after, unchanged rows indented, removed `---`, added `+++`."""
    method = program.method_at(*patch.method_key)
    before = render_method(method, depth=0)
    after = render_method(patched_method(method, patch), depth=0)
    rows = []
    matcher = difflib.SequenceMatcher(a=before, b=after, autojunk=False)
    for tag, a0, a1, b0, b1 in matcher.get_opcodes():
        if tag == "equal":
            rows.extend("   " + row for row in before[a0:a1])
            continue
        rows.extend("---" + row for row in before[a0:a1])
        rows.extend("+++" + row for row in after[b0:b1])
    return rows


def _header(clock: Callable[[], str], plausible: int, generated: int, validated: int, executions: int) -> List[str]:
    return [
        f"{TOOL_NAME} Fix Report - {clock()}",
        f"Number of Plausible Fixes: {plausible}",
        f"Total Number of Patches: {generated}",
        f"Number of Validated Patches: {validated}",
        f"Number of Test Executions: {executions}",
        RULE,
    ]


def _entry(k: int, mutator_id: str, description: str, subject: str, line: int, rank: int,
           validated_rank: int) -> List[str]:
    rows = [ENTRY_SEPARATOR] if k > 1 else []
    rows.append(f"{k}. Mutator = {MUTATOR_NAMES[mutator_id]} ({description}),")
    rows.append(f"File Name = {subject},")
    rows.append(f"Line Number = {line},")
    rows.append(f"Rank = {rank}, Rank Among Validated = {validated_rank}.")
    return rows


def _statistics(tallies: Sequence[Tuple[str, int, int, int]]) -> List[str]:
    if not tallies:
        return []
    rows = [RULE, "Mutator statistics (generated / validated / plausible):"]
    for mid, generated, validated, plausible in tallies:
        rows.append(f"  {mid} {MUTATOR_NAMES[mid]}: {generated} / {validated} / {plausible}")
    return rows


def render_report(result: RepairResult, program: Optional[Program] = None, include_diffs: bool = False,
                  clock: Callable[[], str] = wall_clock) -> str:
    """Numbered plausible patches in rank order.

    Parameters:
    - result: a finished repair run
    - program: the unpatched subject; needed only for diffs
    - include_diffs: append the rendered method diff to every entry
    - clock: timestamp source for the header
    """
    ranked = rank_patches(result)
    validated_rank = rank_validated(result)
    rows = _header(clock, len(ranked), result.generated_count, result.validated_count, result.total_executions)
    for k, rp in enumerate(ranked, start=1):
        patch = rp.record.patch
        rows.extend(_entry(k, patch.mutator_id, patch.description, result.subject, patch.location.line,
                           rp.rank, validated_rank[patch.patch_id]))
        if include_diffs and program is not None:
            rows.append(f"Method = {patch.location.class_name}.{patch.location.method_name}{patch.location.descriptor}")
            rows.extend(render_patch_diff(program, patch))
    rows.extend(_statistics([(mid, t.generated, t.validated, t.plausible)
                             for mid, t in result.tallies().items() if t.generated]))
    return "\n".join(rows) + "\n"


def render_saved_report(saved: ResultFile, clock: Callable[[], str] = wall_clock) -> str:
    """The report of a run read back from its result file; diffs need the program and are omitted."""
    h = saved.header
    plausible = saved.plausible()
    rows = _header(clock, len(plausible), h["generated"], h["validated"], h["executions"])
    for k, r in enumerate(plausible, start=1):
        rows.extend(_entry(k, r["mutator"], r["description"], h["subject"], r["line"], r["rank"],
                           r["validated_rank"]))
    rows.extend(_statistics([(t["mutator"], t["generated"], t["validated"], t["plausible"])
                             for t in saved.tallies]))
    return "\n".join(rows) + "\n"


def _tsv(rows: Sequence[Tuple[int, str, str, int, str]]) -> str:
    return "".join("\t".join(str(field) for field in row) + "\n" for row in rows)


def render_machine_readable(result: RepairResult) -> str:
    """One tab-separated row per plausible patch: rank, mutator id, file, line, description."""
    return _tsv([(rp.rank, rp.record.patch.mutator_id, result.subject, rp.record.patch.location.line,
                  rp.record.patch.description) for rp in rank_patches(result)])


def render_saved_machine_readable(saved: ResultFile) -> str:
    subject = saved.header["subject"]
    return _tsv([(r["rank"], r["mutator"], subject, r["line"], r["description"]) for r in saved.plausible()])
