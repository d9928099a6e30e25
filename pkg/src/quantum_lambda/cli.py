"""The `qlam` command-line tool."""

from __future__ import annotations
import json
import logging
import re
import sys
from enum import IntEnum
from pathlib import Path
from typing import Literal

import click
import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from quantum_lambda.algorithms import CorpusRunner, program_calculus
from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.linearity import check_well_formed, format_path, format_violation
from quantum_lambda.machine import (
    RunResult,
    RunStatus,
    StepHook,
    Transition,
    check_program,
    run,
)
from quantum_lambda.prelude import Desugarer, definitions, parse_program
from quantum_lambda.quantum_state import (
    FactoredState,
    density_matrix,
    factor_history,
    format_amplitude,
    format_factored,
    format_state,
)
from quantum_lambda.reducer import (
    ReductionResult,
    ReductionStatus,
    compare_with_machine,
    reduce_to_normal,
)
from quantum_lambda.syntax import parse, pretty, replace_free
from quantum_lambda.syntax.terms import Calculus, Term
from quantum_lambda.utils.settings import RuntimeSettings

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    ERROR = 1
    STUCK = 2
    BUDGET_EXCEEDED = 3


RUN_EXIT_CODES = {
    RunStatus.HALTED: ExitCode.OK,
    RunStatus.STUCK: ExitCode.STUCK,
    RunStatus.BUDGET_EXCEEDED: ExitCode.BUDGET_EXCEEDED,
}

REDUCE_EXIT_CODES = {
    ReductionStatus.NORMAL: ExitCode.OK,
    ReductionStatus.STUCK: ExitCode.STUCK,
    ReductionStatus.BUDGET_EXCEEDED: ExitCode.BUDGET_EXCEEDED,
}


def _default_max_steps() -> int:
    return RuntimeSettings.from_env().max_steps


class CliConfig(BaseModel):
    """Everything one `qlam` command needs, validated once at the boundary."""

    command: str = Field(..., description="Subcommand name")
    path: Path | None = Field(default=None, description="Program file")
    expression: str | None = Field(default=None, description="Inline program given with -e")
    model: Calculus = Field(default=Calculus.Q, description="Calculus to run the program in")
    max_steps: int = Field(
        default_factory=_default_max_steps, ge=1, description="Step budget of the run"
    )
    trace: bool = Field(default=False, description="Log every fired rule")
    output_format: Literal["text", "json"] = Field(default="text", description="Output format")

    @model_validator(mode="after")
    def _one_source(self) -> CliConfig:
        if (self.path is None) == (self.expression is None):
            raise ValueError("Give exactly one of a program path or -e EXPR")
        return self

    def source(self) -> str:
        if self.expression is not None:
            return self.expression
        assert self.path is not None
        return self.path.read_text(encoding="utf-8")

    def program(self) -> Term:
        return parse_program(self.source(), self.model)


class BranchReport(BaseModel):
    amp_re: float
    amp_im: float
    register_term: str = Field(serialization_alias="register")
    history: list[str] | None = Field(
        default=None, description="Per-branch history, present only when it does not factor"
    )


class RunReport(BaseModel):
    """JSON form of a finished run or reduction."""

    status: str
    steps: int
    history: list[str] = Field(default_factory=list, description="Shared history frames")
    branches: list[BranchReport] = Field(default_factory=list)
    trace: list[str] | None = None

    @classmethod
    def from_run(cls, result: RunResult, trace: list[str] | None = None) -> RunReport:
        factored = factor_history(result.state)
        if isinstance(factored, FactoredState):
            ordered = sorted(factored.register.items(), key=lambda item: pretty(item[0]))
            return cls(
                status=result.status.value,
                steps=result.steps,
                history=[pretty(frame) for frame in factored.history],
                branches=[
                    BranchReport(amp_re=amp.real, amp_im=amp.imag, register_term=pretty(register))
                    for register, amp in ordered
                ],
                trace=trace,
            )
        return cls(
            status=result.status.value,
            steps=result.steps,
            branches=[
                BranchReport(
                    amp_re=amp.real,
                    amp_im=amp.imag,
                    register_term=pretty(config.register),
                    history=[pretty(frame) for frame in config.history.frames()],
                )
                for config, amp in result.state.branches()
            ],
            trace=trace,
        )

    @classmethod
    def from_reduction(cls, result: ReductionResult) -> RunReport:
        ordered = sorted(result.state.items(), key=lambda item: pretty(item[0]))
        return cls(
            status=result.status.value,
            steps=result.steps,
            branches=[
                BranchReport(amp_re=amp.real, amp_im=amp.imag, register_term=pretty(register))
                for register, amp in ordered
            ],
        )


class DensityReport(BaseModel):
    labels: list[str]
    re: list[list[float]]
    im: list[list[float]]


def _trace_line(count: int, moved: Transition) -> str:
    return f"step {count}: {moved.rule.describe()} at {format_path(moved.rule.path)}"


def cmd_run(cfg: CliConfig) -> int:
    """Run the machine and print the status, the step count and the final state."""
    term = cfg.program()
    lines: list[str] = []
    hooks: list[StepHook] = []
    if cfg.trace:

        def record(count: int, moved: Transition) -> None:
            lines.append(_trace_line(count, moved))
            if cfg.output_format == "text":
                click.echo(lines[-1])
                for state_line in format_state(moved.state):
                    click.echo(f"    {state_line}")

        hooks.append(record)

    result = run(term, cfg.model, cfg.max_steps, hooks=hooks)
    if cfg.output_format == "json":
        report = RunReport.from_run(result, lines if cfg.trace else None)
        click.echo(report.model_dump_json(indent=2, exclude_none=True, by_alias=True))
    else:
        click.echo(f"status: {result.status.value}")
        click.echo(f"steps: {result.steps}")
        factored = factor_history(result.state)
        state_lines = (
            format_factored(factored)
            if isinstance(factored, FactoredState)
            else format_state(result.state)
        )
        for line in state_lines:
            click.echo(line)
    return RUN_EXIT_CODES[result.status]


def cmd_check(cfg: CliConfig) -> int:
    """Report linearity violations in λ_q, or `!` forms in λ_i."""
    term = cfg.program()
    if cfg.model is Calculus.Q:
        violations = check_well_formed(term)
        if cfg.output_format == "json":
            click.echo(json.dumps([v.model_dump(mode="json") for v in violations], indent=2))
            return ExitCode.ERROR if violations else ExitCode.OK
        for violation in violations:
            click.echo(format_violation(violation))
        if violations:
            return ExitCode.ERROR
    else:
        check_program(term, cfg.model)
    click.echo("ok")
    return ExitCode.OK


def cmd_reduce(cfg: CliConfig) -> int:
    """Reduce with the register-only reducer."""
    result = reduce_to_normal(cfg.program(), cfg.model, cfg.max_steps)
    if cfg.output_format == "json":
        report = RunReport.from_reduction(result)
        click.echo(report.model_dump_json(indent=2, exclude_none=True, by_alias=True))
    else:
        click.echo(f"status: {result.status.value}")
        click.echo(f"steps: {result.steps}")
        for register, amp in sorted(result.state.items(), key=lambda item: pretty(item[0])):
            click.echo(f"{format_amplitude(amp)}  {pretty(register)}")
    return REDUCE_EXIT_CODES[result.status]


def cmd_verify(cfg: CliConfig) -> int:
    """Check that the reducer tracks the machine's register at every step."""
    if cfg.model is Calculus.I:
        click.echo("verify: not applicable to λ_i programs")
        return ExitCode.ERROR
    report = compare_with_machine(cfg.program(), cfg.max_steps)
    if cfg.output_format == "json":
        click.echo(report.model_dump_json(indent=2))
    elif report.agrees:
        click.echo(f"agrees over {report.steps} steps ({report.status})")
    else:
        click.echo(f"diverges at step {report.first_divergence}: {report.detail}")
    if not report.agrees:
        return ExitCode.ERROR
    if report.status == ReductionStatus.BUDGET_EXCEEDED.value:
        return ExitCode.BUDGET_EXCEEDED
    return ExitCode.OK


def cmd_density(cfg: CliConfig) -> int:
    """Print the density matrix of the final register with the history traced out."""
    result = run(cfg.program(), cfg.model, cfg.max_steps)
    rho = density_matrix(result.state)
    if cfg.output_format == "json":
        report = DensityReport(
            labels=rho.labels,
            re=np.real(rho.matrix).tolist(),
            im=np.imag(rho.matrix).tolist(),
        )
        click.echo(report.model_dump_json(indent=2))
    else:
        width = max(len(label) for label in rho.labels)
        click.echo(" " * width + "  " + "  ".join(rho.labels))
        for label, row in zip(rho.labels, rho.matrix, strict=True):
            cells = "  ".join(format_amplitude(complex(value)) for value in row)
            click.echo(f"{label.ljust(width)}  {cells}")
    return RUN_EXIT_CODES[result.status]


COMMANDS = {
    "run": cmd_run,
    "check": cmd_check,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
    "density": cmd_density,
}

_REPL_LET = re.compile(r"^let\s+!\s*([a-z_][A-Za-z0-9_']*)\s*=\s*(.+)$")


class Repl:
    """λ_q reducer loop with a persistent environment of nonlinear bindings."""

    def __init__(self, max_steps: int) -> None:
        self.max_steps = max_steps
        self.env: dict[str, Term] = {}

    def program(self, source: str) -> Term:
        term = parse(source, Desugarer(Calculus.Q))
        term = replace_free(term, self.env.get)
        return definitions().expand(term, Calculus.Q)

    def handle(self, line: str) -> list[str]:
        """Evaluate one line and return what to print."""
        line = line.strip()
        if not line or line.startswith("--"):
            return []
        binding = _REPL_LET.match(line)
        if binding is not None:
            name, source = binding.groups()
            self.env[name] = self.program(source)
            return [f"{name} = {pretty(self.env[name])}"]
        result = reduce_to_normal(self.program(line), Calculus.Q, self.max_steps)
        lines = [] if result.status is ReductionStatus.NORMAL else [f"status: {result.status}"]
        ordered = sorted(result.state.items(), key=lambda item: pretty(item[0]))
        lines.extend(f"{format_amplitude(amp)}  {pretty(register)}" for register, amp in ordered)
        return lines


def _configure_logging(verbose: bool) -> None:
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG,
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )


def _build_config(command: str, path: str | None, expression: str | None, **options) -> CliConfig:
    model = options.pop("model")
    if model is None:
        model = Calculus.Q
        if path is not None:
            model = program_calculus(Path(path).read_text(encoding="utf-8"))
    fields = {k: v for k, v in options.items() if v is not None}
    return CliConfig(
        command=command,
        path=Path(path) if path is not None else None,
        expression=expression,
        model=Calculus(model),
        **fields,
    )


def _execute(command: str, path: str | None, expression: str | None, **options) -> None:
    try:
        cfg = _build_config(command, path, expression, **options)
        logger.debug("Running %s in λ_%s with budget %d", command, cfg.model, cfg.max_steps)
        code = COMMANDS[command](cfg)
    except (QuantumLambdaError, ValidationError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ExitCode.ERROR)
    sys.exit(int(code))


def program_options(func):
    """Shared program source and budget options of the program commands."""
    decorators = [
        click.argument(
            "path", required=False, type=click.Path(exists=True, dir_okay=False, path_type=str)
        ),
        click.option("--expr", "-e", "expression", help="Program text given inline."),
        click.option(
            "--model",
            "-m",
            type=click.Choice(["q", "i"]),
            default=None,
            help="Calculus to use (default: the file's `-- model:` header, else q).",
        ),
        click.option(
            "--max-steps",
            type=int,
            default=None,
            help="Step budget (default: QLAM_MAX_STEPS or 10000).",
        ),
        click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text."),
    ]
    for decorator in reversed(decorators):
        func = decorator(func)
    return func


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log machine steps to stderr.")
def cli(verbose: bool) -> None:
    """Interpreter and simulator for the quantum lambda calculi λ_i and λ_q."""
    _configure_logging(verbose)


@cli.command("check")
@program_options
def check_cli(
    path: str | None,
    expression: str | None,
    model: str | None,
    max_steps: int | None,
    as_json: bool,
) -> None:
    """Check a program: linearity in λ_q, absence of `!` in λ_i.

    Example:
        qlam check src/quantum_lambda/algorithms/programs/deutsch.lq
    """
    _execute(
        "check",
        path,
        expression,
        model=model,
        max_steps=max_steps,
        output_format="json" if as_json else "text",
    )


@cli.command("run")
@program_options
@click.option("--trace", is_flag=True, help="Print every fired rule and the state after it.")
def run_cli(
    path: str | None,
    expression: str | None,
    model: str | None,
    max_steps: int | None,
    as_json: bool,
    trace: bool,
) -> None:
    """Run a program on the history-track machine.

    Exit codes: 0 halted, 2 stuck, 3 budget exceeded, 1 error.

    Example:
        qlam run src/quantum_lambda/algorithms/programs/qft3.lq --trace
    """
    _execute(
        "run",
        path,
        expression,
        model=model,
        max_steps=max_steps,
        trace=trace,
        output_format="json" if as_json else "text",
    )


@cli.command("reduce")
@program_options
def reduce_cli(
    path: str | None,
    expression: str | None,
    model: str | None,
    max_steps: int | None,
    as_json: bool,
) -> None:
    """Reduce a program on the register alone, without history.

    Example:
        qlam reduce -e "H (H 0)"
    """
    _execute(
        "reduce",
        path,
        expression,
        model=model,
        max_steps=max_steps,
        output_format="json" if as_json else "text",
    )


@cli.command("verify")
@program_options
def verify_cli(
    path: str | None,
    expression: str | None,
    model: str | None,
    max_steps: int | None,
    as_json: bool,
) -> None:
    """Run the machine and the reducer in lockstep and compare their registers.

    Example:
        qlam verify src/quantum_lambda/algorithms/programs/teleport.lq
    """
    _execute(
        "verify",
        path,
        expression,
        model=model,
        max_steps=max_steps,
        output_format="json" if as_json else "text",
    )


@cli.command("density")
@program_options
def density_cli(
    path: str | None,
    expression: str | None,
    model: str | None,
    max_steps: int | None,
    as_json: bool,
) -> None:
    """Print the density matrix of the final register.

    Example:
        qlam density src/quantum_lambda/algorithms/programs/mixed_state.lq
    """
    _execute(
        "density",
        path,
        expression,
        model=model,
        max_steps=max_steps,
        output_format="json" if as_json else "text",
    )


@cli.command("repl")
@click.option("--max-steps", type=int, default=None, help="Step budget per expression.")
def repl_cli(max_steps: int | None) -> None:
    """Evaluate λ_q expressions line by line; `let !name = expr` binds, `:q` quits.

    Example:
        qlam repl
    """
    try:
        budget = max_steps if max_steps is not None else _default_max_steps()
        if budget < 1:
            raise ValueError(f"max_steps must be at least 1, got {budget}")
    except (ValidationError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ExitCode.ERROR)
    repl = Repl(budget)
    stdin = click.get_text_stream("stdin")
    for line in stdin:
        if line.strip() == ":q":
            break
        try:
            for output in repl.handle(line):
                click.echo(output)
        except (QuantumLambdaError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)


@cli.command("corpus")
@click.option(
    "--output",
    "output_csv",
    required=True,
    type=click.Path(dir_okay=False, path_type=str),
    help="Path to output CSV to write.",
)
@click.option(
    "--program-ids",
    "-p",
    multiple=True,
    help="Optional program IDs to run (repeatable). If omitted, runs the whole corpus.",
)
@click.option("--max-steps", type=int, default=None, help="Step budget per program.")
def corpus_cli(output_csv: str, program_ids: tuple[str, ...], max_steps: int | None) -> None:
    """Run the bundled programs and write one CSV row per program.

    Example:
        qlam corpus --output output/corpus.csv -p deutsch -p teleport
    """
    runner = CorpusRunner(max_steps=max_steps)
    try:
        rows = runner.run_csv(output_csv, list(program_ids) if program_ids else None)
    except (QuantumLambdaError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(ExitCode.ERROR)
    failed = [row["program_id"] for row in rows if row["agrees_with_reducer"] is False]
    click.echo(f"Wrote {len(rows)} rows to {output_csv}")
    if failed:
        click.echo(f"Reducer disagrees on: {', '.join(failed)}", err=True)
        sys.exit(ExitCode.ERROR)


if __name__ == "__main__":
    cli()
