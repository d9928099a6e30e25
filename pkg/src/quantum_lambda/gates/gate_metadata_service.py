"""Centralized service for reading gate metadata from YAML."""

import cmath
import logging
from dataclasses import dataclass
from functools import cache, cached_property
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from pydantic import BaseModel, Field, field_validator

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.syntax.terms import ConstantId

logger = logging.getLogger(__name__)

UNITARITY_TOLERANCE = 1e-12


class GateError(QuantumLambdaError):
    """Unknown gate, non-unitary matrix or bad gate parameter."""


def get_gate_metadata_path() -> Path:
    """Get the standardized path to gate_metadata.yaml.

    Returns:
        Path to the gate_metadata.yaml file.
    """
    current_dir = Path(__file__).parent
    return current_dir / "gate_metadata.yaml"


class GateMetadata(BaseModel):
    """Pydantic model for one constant of the calculi."""

    constant: ConstantId = Field(..., description="Constant symbol as written in source")
    arity: int = Field(..., ge=0, le=2, description="Number of bit slots the gate acts on")
    universal: bool = Field(default=False, description="Member of the universal set")
    parameterized: bool = Field(default=False, description="Matrix depends on a numeral")
    description: str = Field(..., min_length=1)
    matrix: list[list[str]] | None = Field(default=None)

    @field_validator("constant", mode="before")
    @classmethod
    def _coerce_constant(cls, value: Any) -> Any:
        # yaml reads the bit symbols 0 and 1 as integers when unquoted
        return str(value)


@dataclass(frozen=True)
class GateSpec:
    """A named unitary acting on `arity` bit slots."""

    constant: ConstantId
    arity: int
    matrix: np.ndarray
    parameter: int | None = None

    @property
    def label(self) -> str:
        if self.parameter is None:
            return self.constant.value
        return f"{self.constant.value}({self.parameter})"

    def adjoint(self) -> "GateSpec":
        return GateSpec(self.constant, self.arity, self.matrix.conj().T, self.parameter)


def is_unitary(matrix: np.ndarray, tolerance: float = UNITARITY_TOLERANCE) -> bool:
    identity = np.eye(matrix.shape[0], dtype=complex)
    return bool(np.allclose(matrix.conj().T @ matrix, identity, rtol=0.0, atol=tolerance))


def cphase_matrix(n: int) -> np.ndarray:
    """diag(1, 1, 1, e^{2πi/2ⁿ}) for n ≥ 1."""
    if n < 1:
        raise GateError(f"cphase needs n >= 1, got {n}")
    return np.diag([1, 1, 1, cmath.exp(2j * cmath.pi / 2**n)]).astype(complex)


class GateMetadataService:
    """Centralized service for reading gate metadata from YAML and building GateSpecs."""

    def _load_yaml(self) -> dict[str, Any]:
        """Load YAML file.

        Returns:
            Dictionary containing the YAML data.
        """
        yaml_path = get_gate_metadata_path()
        with open(yaml_path) as f:
            return yaml.safe_load(f)

    @cached_property
    def _by_constant(self) -> dict[ConstantId, GateMetadata]:
        entries = [GateMetadata.model_validate(g) for g in self._load_yaml().get("gates", [])]
        logger.debug("Loaded %d gate definitions", len(entries))
        return {entry.constant: entry for entry in entries}

    def get_all_gate_metadata(self) -> list[GateMetadata]:
        """Get all gate metadata, validated as GateMetadata objects.

        Returns:
            List of validated GateMetadata objects.

        Raises:
            ValidationError: If any entry fails Pydantic validation.
        """
        return list(self._by_constant.values())

    def get_gate_metadata(self, constant: ConstantId) -> GateMetadata:
        try:
            return self._by_constant[constant]
        except KeyError as exc:
            raise GateError(f"No metadata for constant {constant.value}") from exc

    def arity(self, constant: ConstantId) -> int:
        return self.get_gate_metadata(constant).arity

    def universal_constants(self) -> set[ConstantId]:
        return {entry.constant for entry in self._by_constant.values() if entry.universal}

    def gate_spec(self, constant: ConstantId, parameter: int | None = None) -> GateSpec:
        """Build the unitary for a gate constant.

        Args:
            constant: A gate constant (not a bit).
            parameter: The numeral argument of a parameterized gate such as cphase.

        Returns:
            The GateSpec, checked for unitarity.

        Raises:
            GateError: If the constant is a bit, the parameter is missing or unexpected, or the
                matrix is not unitary.
        """
        metadata = self.get_gate_metadata(constant)
        if metadata.arity == 0:
            raise GateError(f"Constant {constant.value} is a bit, not a gate")
        if metadata.parameterized:
            if parameter is None:
                raise GateError(f"Gate {constant.value} needs a parameter")
            matrix = cphase_matrix(parameter)
        else:
            if parameter is not None:
                raise GateError(f"Gate {constant.value} takes no parameter")
            if metadata.matrix is None:
                raise GateError(f"Gate {constant.value} has no matrix")
            matrix = np.array([[complex(entry) for entry in row] for row in metadata.matrix])
        if matrix.shape != (2**metadata.arity, 2**metadata.arity):
            raise GateError(f"Gate {constant.value} matrix has shape {matrix.shape}")
        if not is_unitary(matrix):
            raise GateError(f"Gate {constant.value} matrix is not unitary")
        return GateSpec(constant, metadata.arity, matrix, parameter)


_service = GateMetadataService()


@cache
def gate_spec(constant: ConstantId, parameter: int | None = None) -> GateSpec:
    return _service.gate_spec(constant, parameter)


def gate_arity(constant: ConstantId) -> int:
    return _service.arity(constant)
