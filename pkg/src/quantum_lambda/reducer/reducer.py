"""Register-only reduction: the machine's rules without the history track."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from quantum_lambda._compat import StrEnum

from quantum_lambda.gates import gate_spec
from quantum_lambda.machine import (
    RuleTag,
    check_program,
    contract,
    contract_gate,
    resolve_budget,
    select_redex,
)
from quantum_lambda.quantum_state import BitSlot, apply_unitary
from quantum_lambda.reducer.context import RegisterState
from quantum_lambda.syntax.operations import is_value, replace_at, subterm_at
from quantum_lambda.syntax.terms import Calculus, Term

logger = logging.getLogger(__name__)


class ReductionStatus(StrEnum):
    NORMAL = "normal"
    STUCK = "stuck"
    BUDGET_EXCEEDED = "budget"


@dataclass(frozen=True)
class ReductionResult:
    status: ReductionStatus
    state: RegisterState
    steps: int


def reduce_step(
    state: RegisterState, calculus: Calculus = Calculus.Q
) -> RegisterState | ReductionStatus:
    """Apply one call-by-value step uniformly to every branch.

    Returns:
        The next state, or NORMAL when the shape is a value and STUCK when no rule applies.
    """
    shape = state.shape
    rule = select_redex(shape, calculus)
    if rule.tag is RuleTag.ID:
        return ReductionStatus.NORMAL if is_value(shape, calculus) else ReductionStatus.STUCK
    if rule.tag is RuleTag.GATE:
        assert rule.gate is not None
        gate = gate_spec(rule.gate, rule.parameter)
        slots = [BitSlot(slot) for slot in rule.slots]
        applied = RegisterState.from_superposition(
            apply_unitary(state.to_superposition(), slots, gate)
        )
        return RegisterState(
            {contract_gate(term, rule.path): amplitude for term, amplitude in applied.items()}
        )
    amplitudes: dict[Term, complex] = {}
    for term, amplitude in state.items():
        contractum, _ = contract(subterm_at(term, rule.path), rule)
        reduced = replace_at(term, rule.path, contractum)
        amplitudes[reduced] = amplitudes.get(reduced, 0j) + amplitude
    return RegisterState(amplitudes)


def reduce_to_normal(
    term: Term, calculus: Calculus = Calculus.Q, max_steps: int | None = None
) -> ReductionResult:
    """Reduce a definite program until it is a value, sticks, or exhausts the budget.

    Raises:
        ValueError: If the budget is below 1.
        WellFormednessError: If a λ_q program fails the linearity check.
        CalculusError: If a λ_i program uses `!` or `λ!`.
    """
    budget = resolve_budget(max_steps)
    check_program(term, calculus)
    state = RegisterState.single(term)
    for count in range(budget):
        reduced = reduce_step(state, calculus)
        if isinstance(reduced, ReductionStatus):
            logger.info("Reduction %s after %d steps", reduced, count)
            return ReductionResult(reduced, state, count)
        state = reduced
    logger.info("Reduction exceeded its budget of %d steps", budget)
    return ReductionResult(ReductionStatus.BUDGET_EXCEEDED, state, budget)
