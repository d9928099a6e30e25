"""Density matrices obtained by tracing out the history track."""

from __future__ import annotations
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from quantum_lambda.quantum_state.superposition import (
    BitSlot,
    Configuration,
    History,
    Superposition,
    slot_index,
)
from quantum_lambda.syntax.operations import replace_at
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import PLACEHOLDER, Term


@dataclass(frozen=True)
class DensityMatrix:
    """ρ indexed by the distinct register terms, sorted by their printed form."""

    registers: list[Term]
    labels: list[str]
    matrix: np.ndarray

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tolerance: float = 1e-9) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=tolerance))

    def rank(self, tolerance: float = 1e-9) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > tolerance))


def density_matrix(state: Superposition) -> DensityMatrix:
    """Trace the history out of |ψ⟩⟨ψ|.

    ρ[i, j] = Σ_h ψ(h, r_i) ψ(h, r_j)*, summed over distinct histories h.
    """
    labelled = sorted({config.register for config in state}, key=pretty)
    labels = [pretty(register) for register in labelled]
    position = {register: index for index, register in enumerate(labelled)}
    by_history: dict[History, np.ndarray] = {}
    for config, amplitude in state.items():
        vector = by_history.get(config.history)
        if vector is None:
            vector = by_history[config.history] = np.zeros(len(labelled), dtype=complex)
        vector[position[config.register]] += amplitude
    matrix = np.zeros((len(labelled), len(labelled)), dtype=complex)
    for vector in by_history.values():
        matrix += np.outer(vector, vector.conj())
    return DensityMatrix(registers=labelled, labels=labels, matrix=matrix)


def reduced_density(state: Superposition, slots: Sequence[BitSlot]) -> np.ndarray:
    """Marginal density matrix of the qubits at `slots`, tracing out everything else.

    The basis is indexed by the slot bits with the first slot most significant.

    Raises:
        SlotNotBitError: If some branch lacks a bit at one of the slots.
    """
    dimension = 2 ** len(slots)
    environment: dict[Configuration, np.ndarray] = {}
    for config, amplitude in state.items():
        index = slot_index(config.register, slots)
        rest = config.register
        for slot in slots:
            rest = replace_at(rest, slot.path, PLACEHOLDER)
        key = Configuration(config.history, rest)
        vector = environment.get(key)
        if vector is None:
            vector = environment[key] = np.zeros(dimension, dtype=complex)
        vector[index] += amplitude
    matrix = np.zeros((dimension, dimension), dtype=complex)
    for vector in environment.values():
        matrix += np.outer(vector, vector.conj())
    return matrix
