import pytest

from conftest import FIXED_TIMESTAMP, fixture_path
from engine.main import EXIT_NO_PLAUSIBLE, EXIT_OK, EXIT_SUBJECT, EXIT_USAGE, main
from repair.results import load_result
from test_report import LANG10_REPORT


@pytest.fixture(autouse=True)
def _no_env_timestamp(monkeypatch):
    monkeypatch.delenv("MVM_FIXED_TIMESTAMP", raising=False)


def _main(tmp_path, *args):
    return main([*args, "--logs-dir", str(tmp_path / "logs")])


def test_repair_prints_the_report(tmp_path, capsys):
    code = _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")), "--fixed-timestamp", FIXED_TIMESTAMP)
    assert code == EXIT_OK
    assert capsys.readouterr().out == LANG10_REPORT
    assert (tmp_path / "logs" / "repair.log").exists()


def test_repair_writes_output_files(tmp_path):
    out = tmp_path / "out"
    code = _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")), "--out", str(out),
                 "--machine-readable", "--fixed-timestamp", FIXED_TIMESTAMP)
    assert code == EXIT_OK
    assert (out / "lang10_analog.report.txt").read_text(encoding="utf-8") == LANG10_REPORT
    result = load_result((out / "lang10_analog.result.jsonl").read_text(encoding="utf-8"))
    assert result.header["plausible"] == 2
    assert (out / "lang10_analog.report.tsv").read_text(encoding="utf-8").startswith("1\tCO\t")


def test_report_command_reads_saved_results(tmp_path, capsys):
    out = tmp_path / "out"
    assert _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")), "--out", str(out),
                 "--fixed-timestamp", FIXED_TIMESTAMP) == EXIT_OK
    saved = str(out / "lang10_analog.result.jsonl")
    assert _main(tmp_path, "report", saved, "--fixed-timestamp", FIXED_TIMESTAMP) == EXIT_OK
    assert capsys.readouterr().out == LANG10_REPORT
    assert _main(tmp_path, "report", saved, "--machine-readable") == EXIT_OK
    assert capsys.readouterr().out.startswith("1\tCO\tlang10_analog.mvm\t307\t")
    assert _main(tmp_path, "report", saved, "--out", str(tmp_path / "again"),
                 "--fixed-timestamp", FIXED_TIMESTAMP) == EXIT_OK
    assert (tmp_path / "again" / "lang10_analog.report.txt").read_text(encoding="utf-8") == LANG10_REPORT


def test_report_command_rejects_bad_result_files(tmp_path):
    stale = tmp_path / "stale.result.jsonl"
    stale.write_text('{"kind": "header", "version": 0}\n', encoding="utf-8")
    assert _main(tmp_path, "report", str(stale)) == EXIT_SUBJECT
    broken = tmp_path / "broken.result.jsonl"
    broken.write_text("not json\n", encoding="utf-8")
    assert _main(tmp_path, "report", str(broken)) == EXIT_SUBJECT
    assert _main(tmp_path, "report", str(tmp_path / "absent.result.jsonl")) == EXIT_USAGE


def test_parallel_output_is_identical(tmp_path):
    outputs = []
    for jobs in ("1", "4"):
        out = tmp_path / f"jobs{jobs}"
        assert _main(tmp_path, "repair", str(fixture_path("economy_tax.mvm")), "--out", str(out),
                     "--jobs", jobs, "--fixed-timestamp", FIXED_TIMESTAMP) in (EXIT_OK, EXIT_NO_PLAUSIBLE)
        outputs.append([(out / name).read_bytes() for name in ("economy_tax.report.txt", "economy_tax.result.jsonl")])
    assert outputs[0] == outputs[1]


def test_timestamp_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MVM_FIXED_TIMESTAMP", "Mon Jan 01 00:00:00 2024")
    assert _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm"))) == EXIT_OK
    assert capsys.readouterr().out.startswith("MVM-Repair Fix Report - Mon Jan 01 00:00:00 2024\n")


def test_no_plausible_patch(tmp_path):
    assert _main(tmp_path, "repair", str(fixture_path("seeded_two_faults.mvm"))) == EXIT_NO_PLAUSIBLE


def test_green_suite_is_a_subject_error(tmp_path):
    assert _main(tmp_path, "repair", str(fixture_path("mutation_score.mvm"))) == EXIT_SUBJECT


def test_worst_subject_decides(tmp_path):
    code = _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")),
                 str(fixture_path("seeded_two_faults.mvm")), "--fixed-timestamp")
    assert code == EXIT_NO_PLAUSIBLE


def test_mutation_score_command(tmp_path, capsys):
    code = _main(tmp_path, "mutation-score", str(fixture_path("mutation_score.mvm")), "--mutators", "IC")
    assert code == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out == ["mutation_score.mvm: 6 killed, 10 mutants, 2 equivalent", "MS = 0.75"]


def test_mutation_score_of_a_failing_suite(tmp_path):
    assert _main(tmp_path, "mutation-score", str(fixture_path("lang10_analog.mvm"))) == EXIT_SUBJECT


def test_bad_mask_is_a_usage_error(tmp_path, capsys):
    assert _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")), "--mutators", "XX") == EXIT_USAGE
    assert "mvm-repair:" in capsys.readouterr().err


def test_unknown_command_is_a_usage_error(tmp_path):
    assert _main(tmp_path, "explode", str(fixture_path("lang10_analog.mvm"))) == EXIT_USAGE


def test_missing_file(tmp_path):
    assert _main(tmp_path, "verify", str(tmp_path / "absent.mvm")) == EXIT_USAGE


def test_syntax_error_is_a_subject_error(tmp_path):
    broken = tmp_path / "broken.mvm"
    broken.write_text(".class A\n  .method static int f()\n    frobnicate 3\n  .end\n", encoding="utf-8")
    assert _main(tmp_path, "verify", str(broken)) == EXIT_SUBJECT


def test_undecodable_subject_is_a_subject_error(tmp_path):
    garbled = tmp_path / "garbled.mvm"
    garbled.write_bytes(b".class A\xff\n")
    assert _main(tmp_path, "verify", str(garbled)) == EXIT_SUBJECT


def test_verification_error_is_a_subject_error(tmp_path):
    bad = tmp_path / "bad.mvm"
    bad.write_text(".class A\n  .method static int f()\n    const true\n    return int\n  .end\n", encoding="utf-8")
    assert _main(tmp_path, "verify", str(bad)) == EXIT_SUBJECT
    assert _main(tmp_path, "render", str(bad)) == EXIT_OK


def test_verify_render_and_coverage(tmp_path, capsys):
    path = str(fixture_path("lang10_analog.mvm"))
    assert _main(tmp_path, "verify", path) == EXIT_OK
    assert capsys.readouterr().out.startswith("lang10_analog.mvm: OK (")
    assert _main(tmp_path, "render", path) == EXIT_OK
    assert ".class Lexer" in capsys.readouterr().out
    assert _main(tmp_path, "coverage", path) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].startswith("FAIL\tweight of a space\t")
    assert rows[1].startswith("pass\tweight of five\t")
    assert rows[3].startswith("1.000000\t1\t0\tLexer.weight(int)int:309")


def test_config_file_values_are_overridden(tmp_path, capsys):
    config = tmp_path / "run.yaml"
    config.write_text("mutators: IC\nfixed_timestamp: From File\n", encoding="utf-8")
    path = str(fixture_path("mutation_score.mvm"))
    assert _main(tmp_path, "mutation-score", path, "--config", str(config)) == EXIT_OK
    assert capsys.readouterr().out.splitlines()[-1] == "MS = 0.75"
    assert _main(tmp_path, "repair", str(fixture_path("lang10_analog.mvm")), "--config", str(config),
                 "--mutators", "CO") == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("MVM-Repair Fix Report - From File\n")
    assert "Number of Plausible Fixes: 1" in out
