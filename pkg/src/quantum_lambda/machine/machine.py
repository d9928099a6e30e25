"""The reversible history-track machine: steps, runs and backward steps."""

from __future__ import annotations
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from quantum_lambda._compat import StrEnum

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.gates import gate_spec
from quantum_lambda.linearity import Violation, check_well_formed, format_violation
from quantum_lambda.machine.redex import (
    CalculusError,
    RuleTag,
    StepRule,
    contract,
    contract_gate,
    gate_frame,
    select_redex,
    wrap_frame,
)
from quantum_lambda.quantum_state import (
    BitSlot,
    Configuration,
    Superposition,
    apply_unitary,
)
from quantum_lambda.syntax.operations import (
    UneraseMismatch,
    contains_bang,
    is_value,
    replace_at,
    shift,
    subterm_at,
    unerase,
)
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import (
    PLACEHOLDER,
    App,
    Bang,
    BangLam,
    Calculus,
    Lam,
    Path,
    Placeholder,
    Term,
)
from quantum_lambda.utils.settings import RuntimeSettings

logger = logging.getLogger(__name__)


class WellFormednessError(QuantumLambdaError):
    """A λ_q program failed the linearity check before running."""

    def __init__(self, violations: Sequence[Violation]) -> None:
        self.violations = list(violations)
        lines = "\n".join(format_violation(v) for v in self.violations)
        super().__init__(f"Program is not well-formed:\n{lines}")


class MalformedHistoryError(QuantumLambdaError):
    """The top history frame does not match the rule being undone."""


class RunStatus(StrEnum):
    HALTED = "halted"
    STUCK = "stuck"
    BUDGET_EXCEEDED = "budget"


@dataclass(frozen=True)
class Transition:
    rule: StepRule
    state: Superposition


@dataclass(frozen=True)
class RunResult:
    status: RunStatus
    state: Superposition
    steps: int
    trace: list[StepRule] = field(default_factory=list)

    def terminated_by_history(self) -> bool:
        """Termination read off the history alone: the last frame is φ."""
        return isinstance(self.state.shape.history.last, Placeholder)


StepHook = Callable[[int, Transition], None]


def transition(state: Superposition, calculus: Calculus) -> Transition:
    """Apply the rule selected on the shared register shape to every branch."""
    rule = select_redex(state.shape.register, calculus)
    if rule.tag is RuleTag.ID:
        pairs = (
            (Configuration(config.history.push(PLACEHOLDER), config.register), amplitude)
            for config, amplitude in state.items()
        )
        return Transition(rule, Superposition.from_pairs(pairs))
    if rule.tag is RuleTag.GATE:
        return Transition(rule, _gate_step(state, rule))

    frames: dict[Term, Term] = {}
    pairs_out: list[tuple[Configuration, complex]] = []
    for config, amplitude in state.items():
        contractum, core = contract(subterm_at(config.register, rule.path), rule)
        frame = wrap_frame(core, rule.path)
        frame = frames.setdefault(frame, frame)
        register = replace_at(config.register, rule.path, contractum)
        pairs_out.append((Configuration(config.history.push(frame), register), amplitude))
    return Transition(rule, Superposition.from_pairs(pairs_out))


def _gate_step(state: Superposition, rule: StepRule) -> Superposition:
    assert rule.gate is not None
    gate = gate_spec(rule.gate, rule.parameter)
    frame = wrap_frame(gate_frame(subterm_at(state.shape.register, rule.path)), rule.path)
    recorded = Superposition.from_pairs(
        (Configuration(config.history.push(frame), config.register), amplitude)
        for config, amplitude in state.items()
    )
    applied = apply_unitary(recorded, [BitSlot(slot) for slot in rule.slots], gate)
    return Superposition.from_pairs(
        (Configuration(config.history, contract_gate(config.register, rule.path)), amplitude)
        for config, amplitude in applied.items()
    )


def step(state: Superposition, calculus: Calculus) -> Superposition:
    """One machine step; see `transition` for the rule that fired."""
    return transition(state, calculus).state


def resolve_budget(max_steps: int | None) -> int:
    """The explicit budget, or the configured one when None.

    Raises:
        ValueError: If the budget is below 1.
    """
    budget = RuntimeSettings.from_env().max_steps if max_steps is None else max_steps
    if budget < 1:
        raise ValueError(f"max_steps must be at least 1, got {budget}")
    return budget


def check_program(term: Term, calculus: Calculus) -> None:
    """Reject programs the chosen calculus cannot run.

    Raises:
        WellFormednessError: If a λ_q program fails the linearity check.
        CalculusError: If a λ_i program uses `!` or `λ!`.
    """
    if calculus is Calculus.Q:
        violations = check_well_formed(term)
        if violations:
            raise WellFormednessError(violations)
    elif contains_bang(term):
        raise CalculusError("λ_i programs may not use ! or \\!")


def run(
    term: Term,
    calculus: Calculus = Calculus.Q,
    max_steps: int | None = None,
    trace: bool = False,
    hooks: Sequence[StepHook] = (),
) -> RunResult:
    """Run the machine from a definite closed term until the first (Id) step.

    Args:
        term: The program.
        calculus: Which rule set to use.
        max_steps: Step budget; defaults to the configured `max_steps`.
        trace: Record every fired rule in the result.
        hooks: Called with (step number, transition) after every step.

    Returns:
        Halted when (Id) fires on a value register, Stuck when it fires on a non-value,
        BudgetExceeded when the budget runs out first.

    Raises:
        ValueError: If the budget is below 1.
        WellFormednessError: If a λ_q program fails the linearity check.
        CalculusError: If a λ_i program uses `!` or `λ!`.
    """
    budget = resolve_budget(max_steps)
    check_program(term, calculus)

    state = Superposition.single(term)
    fired: list[StepRule] = []
    for count in range(1, budget + 1):
        moved = transition(state, calculus)
        state = moved.state
        logger.debug("step %d: %s at %s", count, moved.rule.describe(), moved.rule.path)
        for hook in hooks:
            hook(count, moved)
        if trace:
            fired.append(moved.rule)
        if moved.rule.tag is RuleTag.ID:
            register = state.shape.register
            status = RunStatus.HALTED if is_value(register, calculus) else RunStatus.STUCK
            logger.info("Run %s after %d steps with %d branches", status, count, len(state))
            return RunResult(status, state, count, fired)
    logger.info("Run exceeded its budget of %d steps", budget)
    return RunResult(RunStatus.BUDGET_EXCEEDED, state, budget, fired)


def _unwrap_frame(frame: Term, path: Path) -> Term:
    for position in path:
        match frame:
            case App(inner, Placeholder()) if position == 0:
                frame = inner
            case App(Placeholder(), inner) if position == 1:
                frame = inner
            case _:
                raise MalformedHistoryError(
                    f"Frame {pretty(frame)} does not record a step at {path}"
                )
    return frame


def _restore_redex(core: Term, contractum: Term, rule: StepRule) -> Term:
    try:
        match rule.tag, core:
            case RuleTag.BETA1, App(Lam(pattern, hint), Placeholder()):
                body, value = unerase(pattern, contractum)
                if value is not None:
                    return App(Lam(body, hint), value)
            case RuleTag.BETA2, App(Lam(Placeholder(), hint), value):
                return App(Lam(shift(contractum, 1), hint), value)
            case RuleTag.BANG_BETA1, App(BangLam(pattern, hint), Placeholder()):
                body, value = unerase(pattern, contractum)
                if value is not None:
                    return App(BangLam(body, hint), Bang(value))
            case RuleTag.BANG_BETA2, App(BangLam(Placeholder(), hint), Bang() as suspension):
                return App(BangLam(shift(contractum, 1), hint), suspension)
    except UneraseMismatch as exc:
        raise MalformedHistoryError(str(exc)) from exc
    raise MalformedHistoryError(f"Frame {pretty(core)} does not match rule {rule.tag}")


def step_backward(state: Superposition, rule: StepRule, calculus: Calculus) -> Superposition:
    """Undo one step using the history alone.

    Raises:
        MalformedHistoryError: If the top frame does not match `rule`.
    """
    if rule.tag is RuleTag.GATE:
        return _gate_backward(state, rule)

    pairs: list[tuple[Configuration, complex]] = []
    for config, amplitude in state.items():
        try:
            history, frame = config.history.pop()
        except ValueError as exc:
            raise MalformedHistoryError("No history left to undo") from exc
        if rule.tag is RuleTag.ID:
            if not isinstance(frame, Placeholder):
                raise MalformedHistoryError(f"Expected φ on top, found {pretty(frame)}")
            register = config.register
        else:
            core = _unwrap_frame(frame, rule.path)
            contractum = subterm_at(config.register, rule.path)
            register = replace_at(
                config.register, rule.path, _restore_redex(core, contractum, rule)
            )
        pairs.append((Configuration(history, register), amplitude))
    logger.debug("Undid %s at %s under %s", rule.describe(), rule.path, calculus)
    return Superposition.from_pairs(pairs)


def _gate_backward(state: Superposition, rule: StepRule) -> Superposition:
    assert rule.gate is not None
    expected_top = None
    pairs: list[tuple[Configuration, complex]] = []
    for config, amplitude in state.items():
        try:
            history, frame = config.history.pop()
        except ValueError as exc:
            raise MalformedHistoryError("No history left to undo") from exc
        core = _unwrap_frame(frame, rule.path)
        if not isinstance(core, App) or not isinstance(core.arg, Placeholder):
            raise MalformedHistoryError(f"Frame {pretty(frame)} is not a gate frame")
        if expected_top is None:
            expected_top = frame
        elif frame != expected_top:
            raise MalformedHistoryError("Gate frames differ between branches")
        operand = subterm_at(config.register, rule.path)
        register = replace_at(config.register, rule.path, App(core.fun, operand))
        pairs.append((Configuration(history, register), amplitude))
    popped = Superposition.from_pairs(pairs)
    gate = gate_spec(rule.gate, rule.parameter).adjoint()
    return apply_unitary(popped, [BitSlot(slot) for slot in rule.slots], gate)

