"""Versioned JSON-lines result files."""

import json
from dataclasses import dataclass
from typing import Dict, List

from core.errors import ConfigurationError
from repair.engine import RepairResult
from repair.ranking import rank_patches, rank_validated

RESULT_VERSION = 1


def result_lines(result: RepairResult) -> List[dict]:
    ranked = {rp.record.patch.patch_id: rp.rank for rp in rank_patches(result)}
    validated_rank = rank_validated(result)
    lines: List[dict] = [{
        "kind": "header",
        "version": RESULT_VERSION,
        "subject": result.subject,
        "mask": result.mask,
        "fuel_multiplier": result.fuel_policy.multiplier,
        "fuel_floor": result.fuel_policy.floor,
        "failing": list(result.failing_tests),
        "passing": list(result.passing_tests),
        "generated": result.generated_count,
        "validated": result.validated_count,
        "plausible": len(result.plausible),
        "executions": result.total_executions,
    }]
    for r in result.records:
        p = r.patch
        lines.append({
            "kind": "record",
            "patch_id": p.patch_id,
            "mutator": p.mutator_id,
            "location": str(p.location),
            "line": p.location.line,
            "description": p.description,
            "status": r.status.value,
            "tests_executed": r.tests_executed,
            "suspiciousness": round(r.suspiciousness, 12),
            "killing_test": r.killing_test,
            "rank": ranked.get(p.patch_id),
            "validated_rank": validated_rank.get(p.patch_id),
        })
    for mid, tally in result.tallies().items():
        if tally.generated:
            lines.append({"kind": "tally", "mutator": mid, "generated": tally.generated,
                          "validated": tally.validated, "plausible": tally.plausible})
    return lines


def dump_result(result: RepairResult) -> str:
    return "".join(json.dumps(line, sort_keys=True) + "\n" for line in result_lines(result))


@dataclass(frozen=True)
class ResultFile:
    header: Dict
    records: List[Dict]
    tallies: List[Dict]

    def plausible(self) -> List[Dict]:
        return sorted((r for r in self.records if r["status"] == "plausible"), key=lambda r: r["rank"])


def load_result(text: str) -> ResultFile:
    try:
        lines = [json.loads(row) for row in text.splitlines() if row.strip()]
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed result file: {exc}") from None
    if not lines or lines[0].get("kind") != "header":
        raise ConfigurationError("result file has no header line")
    if lines[0].get("version") != RESULT_VERSION:
        raise ConfigurationError(f"unsupported result version {lines[0].get('version')}")
    return ResultFile(lines[0], [r for r in lines if r["kind"] == "record"],
                      [r for r in lines if r["kind"] == "tally"])
