"""Cross-checks between the reducer and the history-track machine."""

from __future__ import annotations
import logging
from collections.abc import Mapping

from pydantic import BaseModel, Field

from quantum_lambda.machine import RuleTag, check_program, resolve_budget, transition
from quantum_lambda.quantum_state import NotProduct, Superposition, factor_history
from quantum_lambda.reducer.context import RegisterState
from quantum_lambda.reducer.reducer import ReductionStatus, reduce_step, reduce_to_normal
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import Calculus, Term

logger = logging.getLogger(__name__)

AGREEMENT_TOLERANCE = 1e-9


class AgreementReport(BaseModel):
    """Outcome of running the machine and the reducer side by side."""

    agrees: bool = Field(..., description="Whether every compared step matched")
    steps: int = Field(..., description="Machine steps taken, the final (Id) step included")
    status: str = Field(..., description="How the run ended: normal, stuck or budget")
    first_divergence: int | None = Field(
        default=None, description="First step whose registers differ, if any"
    )
    detail: str = Field(default="", description="Human readable description of the divergence")


def _phase_aligned(amplitudes: Mapping[Term, complex]) -> dict[Term, complex]:
    ordered = sorted(
        ((term, amp) for term, amp in amplitudes.items() if abs(amp) > AGREEMENT_TOLERANCE),
        key=lambda item: pretty(item[0]),
    )
    if not ordered:
        return {}
    reference = ordered[0][1]
    phase = reference / abs(reference)
    return {term: amp / phase for term, amp in ordered}


def register_mismatch(machine_state: Superposition, register: RegisterState) -> str | None:
    """Describe how the machine's register marginal differs from `register`, or None."""
    factored = factor_history(machine_state)
    if isinstance(factored, NotProduct):
        return f"history is entangled with the register ({factored.distinct_histories} histories)"
    expected = _phase_aligned(register.amplitudes)
    actual = _phase_aligned(factored.register)
    if expected.keys() != actual.keys():
        missing = sorted(pretty(term) for term in expected.keys() - actual.keys())
        extra = sorted(pretty(term) for term in actual.keys() - expected.keys())
        return f"branches differ: missing {missing}, unexpected {extra}"
    for term, amplitude in expected.items():
        if abs(actual[term] - amplitude) > AGREEMENT_TOLERANCE:
            return f"amplitude of {pretty(term)} is {actual[term]:.9f}, expected {amplitude:.9f}"
    return None


def compare_with_machine(term: Term, max_steps: int | None = None) -> AgreementReport:
    """Run a λ_q program on the machine and the reducer in lockstep.

    After every step the machine state must factor as a shared history times a register
    superposition equal to the reducer's state, up to a global phase.

    Raises:
        ValueError: If the budget is below 1.
        WellFormednessError: If the program fails the linearity check.
    """
    budget = resolve_budget(max_steps)
    check_program(term, Calculus.Q)
    machine_state = Superposition.single(term)
    register = RegisterState.single(term)

    for count in range(1, budget + 1):
        moved = transition(machine_state, Calculus.Q)
        machine_state = moved.state
        reduced = reduce_step(register, Calculus.Q)
        finished = moved.rule.tag is RuleTag.ID
        if finished != isinstance(reduced, ReductionStatus):
            detail = "machine halted first" if finished else "reducer halted first"
            return _diverged(count, str(moved.rule.tag), detail)
        if isinstance(reduced, RegisterState):
            register = reduced
        mismatch = register_mismatch(machine_state, register)
        if mismatch is not None:
            return _diverged(count, str(moved.rule.tag), mismatch)
        if isinstance(reduced, ReductionStatus):
            logger.info("Machine and reducer agree over %d steps", count)
            return AgreementReport(agrees=True, steps=count, status=reduced.value)
    return AgreementReport(agrees=True, steps=budget, status=ReductionStatus.BUDGET_EXCEEDED.value)


def _diverged(step: int, rule: str, detail: str) -> AgreementReport:
    logger.warning("Machine and reducer diverge at step %d (%s): %s", step, rule, detail)
    return AgreementReport(
        agrees=False, steps=step, status="diverged", first_divergence=step, detail=detail
    )


def agrees_with_machine(term: Term, max_steps: int | None = None) -> bool:
    return compare_with_machine(term, max_steps).agrees


def joinable(
    first: Term, second: Term, calculus: Calculus = Calculus.Q, max_steps: int | None = None
) -> bool:
    """Operational equality: both terms reduce to the same normal register state."""
    left = reduce_to_normal(first, calculus, max_steps)
    right = reduce_to_normal(second, calculus, max_steps)
    if left.status is not ReductionStatus.NORMAL or right.status is not ReductionStatus.NORMAL:
        return False
    terms = left.state.amplitudes.keys() | right.state.amplitudes.keys()
    return all(
        abs(left.state.amplitudes.get(term, 0j) - right.state.amplitudes.get(term, 0j))
        <= AGREEMENT_TOLERANCE
        for term in terms
    )
