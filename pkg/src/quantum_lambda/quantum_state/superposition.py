"""Superpositions of configurations and the unitary action on bit slots."""

from __future__ import annotations
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.gates import GateSpec
from quantum_lambda.syntax.operations import congruent, replace_at, subterm_at
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import PLACEHOLDER, Const, Path, Term, bit_const

logger = logging.getLogger(__name__)

PRUNE_THRESHOLD = 1e-12

Amplitude = complex


class SlotNotBitError(QuantumLambdaError):
    """A gate slot does not hold a bit constant in some branch."""


@dataclass(frozen=True, slots=True)
class BitSlot:
    """Path from the register root to a bit leaf, shared by all congruent branches."""

    path: Path


class History:
    """Persistent history track `h1; ...; hn`.

    Each push shares the previous track, so branches that diverge late share their common
    prefix and equal prefixes compare by identity.
    """

    __slots__ = ("previous", "frame", "length", "_hash")

    def __init__(self, previous: History | None = None, frame: Term | None = None) -> None:
        self.previous = previous
        self.frame = frame
        self.length = 0 if previous is None else previous.length + 1
        self._hash = hash((previous._hash if previous is not None else 0, frame))

    @classmethod
    def of(cls, frames: Iterable[Term]) -> History:
        history = EMPTY_HISTORY
        for frame in frames:
            history = history.push(frame)
        return history

    def push(self, frame: Term) -> History:
        return History(self, frame)

    def pop(self) -> tuple[History, Term]:
        if self.previous is None or self.frame is None:
            raise ValueError("Cannot pop an empty history")
        return self.previous, self.frame

    @property
    def last(self) -> Term | None:
        return self.frame

    def frames(self) -> tuple[Term, ...]:
        collected: list[Term] = []
        node: History | None = self
        while node is not None and node.frame is not None:
            collected.append(node.frame)
            node = node.previous
        return tuple(reversed(collected))

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[Term]:
        return iter(self.frames())

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, History):
            return NotImplemented
        first: History | None = self
        second: History | None = other
        while first is not second:
            if first is None or second is None:
                return False
            if first.length != second.length or first._hash != second._hash:
                return False
            if first.frame != second.frame:
                return False
            first, second = first.previous, second.previous
        return True

    def __repr__(self) -> str:
        return f"History({self.length} frames)"


EMPTY_HISTORY = History()


@dataclass(frozen=True, slots=True)
class Configuration:
    """One history track together with the computational register."""

    history: History
    register: Term
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash((self.history, self.register)))

    def __hash__(self) -> int:
        return self._hash

    def serialize(self) -> str:
        return " ; ".join(pretty(term) for term in (*self.history.frames(), self.register))


def _canonical(amplitude: complex, threshold: float) -> complex:
    real = amplitude.real if abs(amplitude.real) > threshold else 0.0
    imag = amplitude.imag if abs(amplitude.imag) > threshold else 0.0
    return complex(real, imag)


class Superposition:
    """Finite map from configurations to amplitudes with pruning of negligible entries."""

    __slots__ = ("_amplitudes",)

    def __init__(
        self, amplitudes: Mapping[Configuration, complex], threshold: float = PRUNE_THRESHOLD
    ) -> None:
        self._amplitudes = {
            config: _canonical(complex(amplitude), threshold)
            for config, amplitude in amplitudes.items()
            if abs(amplitude) > threshold
        }

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[Configuration, complex]], threshold: float = PRUNE_THRESHOLD
    ) -> Superposition:
        """Build a state, summing amplitudes of equal configurations once."""
        merged: dict[Configuration, complex] = {}
        for config, amplitude in pairs:
            merged[config] = merged.get(config, 0j) + amplitude
        return cls(merged, threshold)

    @classmethod
    def single(cls, register: Term, history: Sequence[Term] = ()) -> Superposition:
        return cls({Configuration(History.of(history), register): 1.0 + 0j})

    @property
    def amplitudes(self) -> Mapping[Configuration, complex]:
        return MappingProxyType(self._amplitudes)

    def items(self) -> Iterable[tuple[Configuration, complex]]:
        return self._amplitudes.items()

    def __iter__(self) -> Iterator[Configuration]:
        return iter(self._amplitudes)

    def __len__(self) -> int:
        return len(self._amplitudes)

    def __contains__(self, config: object) -> bool:
        return config in self._amplitudes

    def amplitude(self, config: Configuration) -> complex:
        return self._amplitudes.get(config, 0j)

    @property
    def shape(self) -> Configuration:
        """Any branch; all branches of a reachable state are congruent to it."""
        if not self._amplitudes:
            raise ValueError("Empty superposition has no shape")
        return next(iter(self._amplitudes))

    def branches(self) -> list[tuple[Configuration, complex]]:
        """Branches in canonical order (by serialized terms)."""
        return sorted(self._amplitudes.items(), key=lambda item: item[0].serialize())

    def __repr__(self) -> str:
        return f"Superposition({len(self)} branches)"


def norm(state: Superposition) -> float:
    """Σ|amp|² over all branches."""
    return float(sum(abs(amplitude) ** 2 for _, amplitude in state.items()))


def slot_index(register: Term, slots: Sequence[BitSlot]) -> int:
    index = 0
    for slot in slots:
        leaf = subterm_at(register, slot.path)
        if not isinstance(leaf, Const) or not leaf.constant.is_bit:
            raise SlotNotBitError(f"Slot {slot.path} holds {pretty(leaf)}, not a bit")
        index = (index << 1) | leaf.constant.bit
    return index


def _with_bits(register: Term, slots: Sequence[BitSlot], index: int) -> Term:
    width = len(slots)
    for position, slot in enumerate(slots):
        bit = (index >> (width - 1 - position)) & 1
        register = replace_at(register, slot.path, bit_const(bit))
    return register


def apply_unitary(
    state: Superposition,
    slots: Sequence[BitSlot],
    gate: GateSpec,
    threshold: float = PRUNE_THRESHOLD,
) -> Superposition:
    """Multiply the amplitude vector over `slots` by the gate matrix, group by group.

    Branches are grouped by their configuration with the slot bits erased; within a group
    the 2ᵏ amplitudes indexed by the slot bits (first slot most significant) are multiplied
    by the unitary.

    Raises:
        SlotNotBitError: If a branch lacks a bit constant at one of the slots.
        ValueError: If the number of slots differs from the gate arity.
    """
    if len(slots) != gate.arity:
        raise ValueError(f"Gate {gate.label} acts on {gate.arity} slots, got {len(slots)}")
    dimension = 2**gate.arity
    groups: dict[Configuration, np.ndarray] = {}
    for config, amplitude in state.items():
        index = slot_index(config.register, slots)
        key_register = config.register
        for slot in slots:
            key_register = replace_at(key_register, slot.path, PLACEHOLDER)
        key = Configuration(config.history, key_register)
        vector = groups.get(key)
        if vector is None:
            vector = groups[key] = np.zeros(dimension, dtype=complex)
        vector[index] += amplitude

    pairs: list[tuple[Configuration, complex]] = []
    for key, vector in groups.items():
        transformed = gate.matrix @ vector
        for index, amplitude in enumerate(transformed):
            if abs(amplitude) > threshold:
                register = _with_bits(key.register, slots, index)
                pairs.append((Configuration(key.history, register), complex(amplitude)))
    return Superposition.from_pairs(pairs, threshold)


@dataclass(frozen=True)
class FactoredState:
    """A state of the form |H⟩ ⊗ Σ c_i |t_i⟩."""

    history: tuple[Term, ...]
    register: dict[Term, complex]


@dataclass(frozen=True)
class NotProduct:
    """The history is entangled with the register."""

    distinct_histories: int


def factor_history(state: Superposition) -> FactoredState | NotProduct:
    """Split off a history shared by every branch, or report that none exists."""
    histories = {config.history for config in state}
    if len(histories) != 1:
        return NotProduct(distinct_histories=len(histories))
    (history,) = histories
    register: dict[Term, complex] = {}
    for config, amplitude in state.items():
        register[config.register] = register.get(config.register, 0j) + amplitude
    return FactoredState(history=history.frames(), register=register)


@dataclass(frozen=True)
class CongruenceViolation:
    part: str
    first: Configuration
    second: Configuration


def _histories_congruent(first: History, second: History) -> bool:
    if first == second:
        return True
    return len(first) == len(second) and all(
        congruent(a, b) for a, b in zip(first.frames(), second.frames(), strict=True)
    )


def check_congruence(state: Superposition) -> CongruenceViolation | None:
    """Compare every branch with the first; report the first incongruent pair."""
    branches = list(state)
    if not branches:
        return None
    reference = branches[0]
    for other in branches[1:]:
        if not congruent(reference.register, other.register):
            return CongruenceViolation("register", reference, other)
        if not _histories_congruent(reference.history, other.history):
            return CongruenceViolation("history", reference, other)
    return None


def format_amplitude(amplitude: complex) -> str:
    return f"({amplitude.real:.6f},{amplitude.imag:.6f})"


def format_state(state: Superposition) -> list[str]:
    """One line per branch: `(re,im)  h1 ; h2 ; ... ; register`."""
    return [f"{format_amplitude(amp)}  {config.serialize()}" for config, amp in state.branches()]


def format_factored(factored: FactoredState) -> list[str]:
    """History once, then one line per register branch in canonical order."""
    lines = ["history: " + " ; ".join(pretty(frame) for frame in factored.history)]
    ordered = sorted(factored.register.items(), key=lambda item: pretty(item[0]))
    lines.extend(f"{format_amplitude(amp)}  {pretty(register)}" for register, amp in ordered)
    return lines
