"""The history-track machine for λ_i and λ_q."""

from .machine import (
    MalformedHistoryError,
    RunResult,
    RunStatus,
    StepHook,
    Transition,
    WellFormednessError,
    check_program,
    resolve_budget,
    run,
    step,
    step_backward,
    transition,
)
from .redex import (
    ID_RULE,
    CalculusError,
    IllFormedRegisterError,
    RuleTag,
    StepRule,
    contract,
    contract_gate,
    normalize_definite,
    select_redex,
    wrap_frame,
)

__all__ = [
    "ID_RULE",
    "CalculusError",
    "IllFormedRegisterError",
    "MalformedHistoryError",
    "RuleTag",
    "RunResult",
    "RunStatus",
    "StepHook",
    "StepRule",
    "Transition",
    "WellFormednessError",
    "check_program",
    "contract",
    "contract_gate",
    "normalize_definite",
    "resolve_budget",
    "run",
    "select_redex",
    "step",
    "step_backward",
    "transition",
    "wrap_frame",
]
