"""Register-only reduction and its agreement with the history-track machine."""

from .context import RegisterState, TermContext
from .equivalence import (
    AGREEMENT_TOLERANCE,
    AgreementReport,
    agrees_with_machine,
    compare_with_machine,
    joinable,
    register_mismatch,
)
from .reducer import ReductionResult, ReductionStatus, reduce_step, reduce_to_normal

__all__ = [
    "AGREEMENT_TOLERANCE",
    "AgreementReport",
    "ReductionResult",
    "ReductionStatus",
    "RegisterState",
    "TermContext",
    "agrees_with_machine",
    "compare_with_machine",
    "joinable",
    "reduce_step",
    "reduce_to_normal",
    "register_mismatch",
]
