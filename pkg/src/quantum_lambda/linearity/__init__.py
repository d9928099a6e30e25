"""Linear well-formedness checking for λ_q."""

from .checker import (
    CheckContext,
    LinearUse,
    Linearity,
    Violation,
    ViolationKind,
    check_well_formed,
    format_path,
    format_violation,
    free_linear_uses,
    is_well_formed,
)

__all__ = [
    "CheckContext",
    "LinearUse",
    "Linearity",
    "Violation",
    "ViolationKind",
    "check_well_formed",
    "format_path",
    "format_violation",
    "free_linear_uses",
    "is_well_formed",
]
