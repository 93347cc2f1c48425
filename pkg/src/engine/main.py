"""Command-line entry point: parse, verify, run tests, repair or mutate, report."""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

# Add src to path for imports
current_dir = os.path.dirname(os.path.abspath(__file__))
src_dir = os.path.dirname(current_dir)
project_root = os.path.dirname(src_dir)

sys.path.insert(0, src_dir)
sys.path.insert(0, project_root)

from asm.parser import SourceUnit, load
from asm.render import render_unit
from core.errors import (
    AsmSyntaxError, ConfigurationError, ContractViolation, MvmError, NothingToRepair, VerificationError,
)
from engine.config import COMMANDS, RunConfig, build_config
from engine.logging_setup import setup_logging
from faultloc.ochiai import rank_suite
from repair.engine import RepairResult, repair
from repair.mutation_score import mutation_score
from repair.results import dump_result, load_result
from report.fix_report import (
    fixed_clock, render_machine_readable, render_report, render_saved_machine_readable, render_saved_report,
    wall_clock,
)
from testsuite.runner import run_suite

logger = logging.getLogger("repair")

EXIT_OK = 0
EXIT_NO_PLAUSIBLE = 1
EXIT_USAGE = 2
EXIT_SUBJECT = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("subjects", nargs="+", help="subject .mvm files (saved .result.jsonl files for report)")
    common.add_argument("--config", help="YAML run configuration; flags override its values")
    common.add_argument("--mutators", help="'original', 'all' or a comma-separated list of mutator ids")
    common.add_argument("--fuel-mult", dest="fuel_mult", type=int, help="per-test fuel multiplier")
    common.add_argument("--fuel-floor", dest="fuel_floor", type=int, help="minimum per-test fuel")
    common.add_argument("--jobs", type=int, help="parallel validation workers")
    common.add_argument("--out", help="directory for report and result files")
    common.add_argument("--fixed-timestamp", dest="fixed_timestamp", nargs="?", const="1970-01-01 00:00:00",
                        help="report timestamp to print instead of the wall clock")
    common.add_argument("--machine-readable", dest="machine_readable", action="store_true", default=None,
                        help="also emit tab-separated plausible patches")
    common.add_argument("--diffs", dest="include_diffs", action="store_true", default=None,
                        help="show the patched method under every report entry")
    common.add_argument("--logs-dir", dest="logs_dir", help="directory for repair.log")
    common.add_argument("--log-level", dest="log_level", help="console and file log level")

    parser = argparse.ArgumentParser(prog="mvm-repair",
                                     description="Mutation-based program repair for MVM assembly subjects")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("repair", parents=[common], help="generate, validate and rank patches")
    sub.add_parser("mutation-score", parents=[common], help="kill ratio of the mutants over a passing suite")
    sub.add_parser("coverage", parents=[common], help="test outcomes and suspiciousness ranking")
    sub.add_parser("verify", parents=[common], help="parse and type-check subjects")
    sub.add_parser("render", parents=[common], help="print subjects in canonical form")
    sub.add_parser("report", parents=[common], help="re-render reports from saved .result.jsonl files")
    return parser


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _clock(config: RunConfig):
    return fixed_clock(config.fixed_timestamp) if config.fixed_timestamp else wall_clock


def emit_repair(config: RunConfig, unit: SourceUnit, result: RepairResult) -> None:
    report = render_report(result, unit.program, config.include_diffs, _clock(config))
    if config.out is None:
        sys.stdout.write(render_machine_readable(result) if config.machine_readable else report)
        return
    stem = Path(unit.file_name).stem
    _write(config.out / f"{stem}.report.txt", report)
    _write(config.out / f"{stem}.result.jsonl", dump_result(result))
    if config.machine_readable:
        _write(config.out / f"{stem}.report.tsv", render_machine_readable(result))
    logger.info(f"wrote {stem} results to {config.out}")


def run_repair(config: RunConfig, unit: SourceUnit) -> int:
    result = repair(unit.program, unit.tests, config.mask, config.fuel_policy, config.jobs,
                    config.baseline_fuel, unit.file_name)
    emit_repair(config, unit, result)
    return EXIT_OK if result.plausible else EXIT_NO_PLAUSIBLE


def run_mutation_score(config: RunConfig, unit: SourceUnit) -> int:
    ms = mutation_score(unit.program, unit.tests, config.mask, unit.equivalents,
                        config.fuel_policy, config.baseline_fuel)
    print(f"{unit.file_name}: {ms.killed} killed, {ms.total} mutants, {ms.equivalent} equivalent")
    print(f"MS = {ms.score:.2f}")
    return EXIT_OK


def run_coverage(config: RunConfig, unit: SourceUnit) -> int:
    run = run_suite(unit.program, unit.tests, config.baseline_fuel)
    for test in unit.tests:
        verdict = "FAIL" if test.name in run.failing_names else "pass"
        print(f"{verdict}\t{test.name}\t{run.outcomes[test.name]}")
    if run.failing:
        for entry in rank_suite(run).entries:
            print(f"{entry.score:.6f}\t{entry.ef}\t{entry.ep}\t{entry.location}")
    return EXIT_OK


def run_verify(config: RunConfig, unit: SourceUnit) -> int:
    print(f"{unit.file_name}: OK ({len(unit.program.project_classes())} classes, {len(unit.tests)} tests)")
    return EXIT_OK


def run_render(config: RunConfig, unit: SourceUnit) -> int:
    sys.stdout.write(render_unit(unit))
    return EXIT_OK


def run_saved_report(config: RunConfig, path: Path) -> int:
    """Report and TSV of an earlier repair run, rebuilt from its result file."""
    try:
        saved = load_result(path.read_text(encoding="utf-8"))
    except OSError as exc:
        logger.error(f"cannot read {path}: {exc}")
        return EXIT_USAGE
    except (UnicodeDecodeError, ConfigurationError) as exc:
        logger.error(f"{path}: {exc}")
        return EXIT_SUBJECT
    report = render_saved_report(saved, _clock(config))
    tsv = render_saved_machine_readable(saved)
    if config.out is None:
        sys.stdout.write(tsv if config.machine_readable else report)
    else:
        stem = path.name.removesuffix(".result.jsonl")
        _write(config.out / f"{stem}.report.txt", report)
        if config.machine_readable:
            _write(config.out / f"{stem}.report.tsv", tsv)
    return EXIT_OK if saved.plausible() else EXIT_NO_PLAUSIBLE


HANDLERS = {
    "repair": run_repair,
    "mutation-score": run_mutation_score,
    "coverage": run_coverage,
    "verify": run_verify,
    "render": run_render,
}


def run_subject(config: RunConfig, path: Path) -> int:
    """One subject through the configured command, mapped onto the exit-code contract."""
    if config.command == "report":
        return run_saved_report(config, path)
    try:
        unit = load(path, check=config.command != "render")
    except OSError as exc:
        logger.error(f"cannot read {path}: {exc}")
        return EXIT_USAGE
    except UnicodeDecodeError as exc:
        logger.error(f"{path}: not valid UTF-8 text: {exc}")
        return EXIT_SUBJECT
    except AsmSyntaxError as exc:
        for diagnostic in exc.diagnostics:
            logger.error(f"{path}: {diagnostic}")
        return EXIT_SUBJECT
    except VerificationError as exc:
        logger.error(f"{path}: verification failed: {exc.diagnostic}")
        return EXIT_SUBJECT
    try:
        return HANDLERS[config.command](config, unit)
    except NothingToRepair:
        logger.error(f"{path}: nothing to repair, every test passes")
        return EXIT_SUBJECT
    except ConfigurationError as exc:
        logger.error(f"{path}: {exc}")
        return EXIT_USAGE
    except ContractViolation as exc:
        logger.error(f"{path}: {exc}")
        return EXIT_SUBJECT


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    overrides: Dict[str, object] = {k: v for k, v in vars(args).items() if k != "config"}
    try:
        config = build_config(overrides, args.config)
    except ConfigurationError as exc:
        print(f"mvm-repair: {exc}", file=sys.stderr)
        return EXIT_USAGE

    setup_logging(str(config.logs_dir), config.log_level)
    codes: List[int] = []
    for path in config.subjects:
        try:
            codes.append(run_subject(config, path))
        except MvmError as exc:
            logger.error(f"{path}: internal error: {exc}")
            codes.append(EXIT_SUBJECT)
    # the most severe subject decides
    return max(codes) if codes else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
