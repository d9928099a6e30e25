import json

import numpy as np
import pytest
from click.testing import CliRunner
from pydantic import BaseModel

from quantum_lambda.algorithms import get_programs_path
from quantum_lambda.cli import BranchReport, ExitCode, Repl, cli

MIXED_STATE = str(get_programs_path() / "mixed_state.lq")


@pytest.fixture
def runner():
    return CliRunner()


def test_run_expression(runner):
    result = runner.invoke(cli, ["run", "-e", "H (H 0)"])
    assert result.exit_code == ExitCode.OK
    assert "status: halted" in result.output
    assert "steps: 3" in result.output
    assert "(1.000000,0.000000)  0" in result.output


def test_run_stuck_program(runner):
    result = runner.invoke(cli, ["run", "-e", r"(\y. (\!z. 0) y) (H 0)"])
    assert result.exit_code == ExitCode.STUCK


def test_run_over_budget(runner):
    result = runner.invoke(cli, ["run", "--max-steps", "1", "-e", "H (H 0)"])
    assert result.exit_code == ExitCode.BUDGET_EXCEEDED


def test_budget_from_environment(runner, monkeypatch):
    monkeypatch.setenv("QLAM_MAX_STEPS", "1")
    result = runner.invoke(cli, ["run", "-e", "H (H 0)"])
    assert result.exit_code == ExitCode.BUDGET_EXCEEDED


def test_run_json(runner):
    result = runner.invoke(cli, ["run", "--json", "-e", "H 0"])
    assert result.exit_code == ExitCode.OK
    report = json.loads(result.output)
    assert report["status"] == "halted"
    assert report["steps"] == 2
    assert report["history"] == ["H φ", "φ"]
    assert [branch["register"] for branch in report["branches"]] == ["0", "1"]
    for branch in report["branches"]:
        assert branch["amp_re"] == pytest.approx(1 / np.sqrt(2))
        assert branch["amp_im"] == pytest.approx(0.0)
        assert "history" not in branch
    assert "trace" not in report


def test_run_json_without_factored_history(runner):
    result = runner.invoke(cli, ["run", "--json", MIXED_STATE])
    assert result.exit_code == ExitCode.OK
    report = json.loads(result.output)
    assert report["history"] == []
    assert len(report["branches"]) == 2
    assert all("history" in branch for branch in report["branches"])


def test_run_trace(runner):
    result = runner.invoke(cli, ["run", "--trace", "-e", "H 0"])
    assert result.exit_code == ExitCode.OK
    assert "step 1: Gate[H] at root" in result.output
    assert "step 2: Id" in result.output


def test_run_needs_exactly_one_source(runner):
    result = runner.invoke(cli, ["run"])
    assert result.exit_code == ExitCode.ERROR


def test_syntax_error_exits_with_error(runner):
    result = runner.invoke(cli, ["run", "-e", r"\x. (x"])
    assert result.exit_code == ExitCode.ERROR


def test_density_of_mixed_state(runner):
    result = runner.invoke(cli, ["density", "--json", MIXED_STATE])
    assert result.exit_code == ExitCode.OK
    report = json.loads(result.output)
    assert report["labels"] == ["0", "1"]
    assert np.allclose(report["re"], [[0.5, 0.0], [0.0, 0.5]], atol=1e-9)
    assert np.allclose(report["im"], np.zeros((2, 2)), atol=1e-9)


def test_density_text(runner):
    result = runner.invoke(cli, ["density", "-e", "cnot [H 0, 0]"])
    assert result.exit_code == ExitCode.OK
    assert "(0.500000,0.000000)" in result.output


def test_check_reports_violations(runner):
    result = runner.invoke(cli, ["check", "-e", r"\x. 0"])
    assert result.exit_code == ExitCode.ERROR
    assert "LinearUsedZero" in result.output


def test_check_json(runner):
    result = runner.invoke(cli, ["check", "--json", "-e", r"\x. x x"])
    assert result.exit_code == ExitCode.ERROR
    (violation,) = json.loads(result.output)
    assert violation["kind"] == "LinearUsedMany"


def test_check_accepts_well_formed_program(runner):
    result = runner.invoke(cli, ["check", "-e", "H 0"])
    assert result.exit_code == ExitCode.OK
    assert result.output.strip() == "ok"


def test_check_rejects_bang_in_untyped_calculus(runner):
    result = runner.invoke(cli, ["check", "-m", "i", "-e", "!0"])
    assert result.exit_code == ExitCode.ERROR


def test_reduce(runner):
    result = runner.invoke(cli, ["reduce", "-e", "H 0"])
    assert result.exit_code == ExitCode.OK
    assert "(0.707107,0.000000)  0" in result.output
    assert "(0.707107,0.000000)  1" in result.output


def test_verify_agrees(runner):
    result = runner.invoke(cli, ["verify", "-e", "H (H 0)"])
    assert result.exit_code == ExitCode.OK
    assert "agrees over 3 steps (normal)" in result.output


def test_verify_not_applicable_in_untyped_calculus(runner):
    result = runner.invoke(cli, ["verify", MIXED_STATE])
    assert result.exit_code == ExitCode.ERROR
    assert "not applicable" in result.output


def test_repl_session(runner):
    session = "-- comment\nlet !flip = \\x. X x\nflip 0\n:q\nflip 1\n"
    result = runner.invoke(cli, ["repl"], input=session)
    assert result.exit_code == ExitCode.OK
    lines = result.output.splitlines()
    assert lines[0].startswith("flip = ")
    assert lines[1] == "(1.000000,0.000000)  1"
    assert len(lines) == 2


def test_repl_reports_budget():
    repl = Repl(max_steps=1)
    assert repl.handle("H (H 0)")[0] == "status: budget"


def test_corpus_command(runner, tmp_path):
    output = tmp_path / "corpus.csv"
    result = runner.invoke(cli, ["corpus", "--output", str(output), "-p", "hadamard_pair"])
    assert result.exit_code == ExitCode.OK
    assert "Wrote 1 rows" in result.output
    assert output.exists()


def test_corpus_command_rejects_unknown_program(runner, tmp_path):
    output = tmp_path / "corpus.csv"
    result = runner.invoke(cli, ["corpus", "--output", str(output), "-p", "nope"])
    assert result.exit_code == ExitCode.ERROR


def test_branch_report_fields_do_not_shadow_model_attributes():
    assert not any(hasattr(BaseModel, name) for name in BranchReport.model_fields)
    branch = BranchReport(amp_re=1.0, amp_im=0.0, register_term="0")
    assert branch.model_dump(by_alias=True, exclude_none=True)["register"] == "0"
