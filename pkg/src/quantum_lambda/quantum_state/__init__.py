"""Superpositions, unitary application, history factoring and density matrices."""

from .density import DensityMatrix, density_matrix, reduced_density
from .superposition import (
    PRUNE_THRESHOLD,
    Amplitude,
    BitSlot,
    EMPTY_HISTORY,
    Configuration,
    CongruenceViolation,
    FactoredState,
    History,
    NotProduct,
    SlotNotBitError,
    Superposition,
    apply_unitary,
    check_congruence,
    factor_history,
    format_amplitude,
    format_factored,
    format_state,
    norm,
    slot_index,
)

__all__ = [
    "PRUNE_THRESHOLD",
    "Amplitude",
    "BitSlot",
    "EMPTY_HISTORY",
    "Configuration",
    "CongruenceViolation",
    "DensityMatrix",
    "FactoredState",
    "History",
    "NotProduct",
    "SlotNotBitError",
    "Superposition",
    "apply_unitary",
    "check_congruence",
    "density_matrix",
    "factor_history",
    "format_amplitude",
    "format_factored",
    "format_state",
    "norm",
    "reduced_density",
    "slot_index",
]
