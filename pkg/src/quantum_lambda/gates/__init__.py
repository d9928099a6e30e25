"""Gate metadata service and unitary specifications."""

from .gate_metadata_service import (
    GateError,
    GateMetadata,
    GateMetadataService,
    GateSpec,
    cphase_matrix,
    gate_arity,
    gate_spec,
    is_unitary,
)

__all__ = [
    "GateError",
    "GateMetadata",
    "GateMetadataService",
    "GateSpec",
    "cphase_matrix",
    "gate_arity",
    "gate_spec",
    "is_unitary",
]
