"""Evaluation contexts `C[ ]` and the register-only state they act on."""

from __future__ import annotations
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from types import MappingProxyType

from quantum_lambda.machine import RuleTag, select_redex
from quantum_lambda.quantum_state import EMPTY_HISTORY, Configuration, Superposition
from quantum_lambda.syntax.operations import replace_at, subterm_at
from quantum_lambda.syntax.terms import PLACEHOLDER, App, Bang, Calculus, Path, Term


@dataclass(frozen=True)
class TermContext:
    """A term with one hole, kept as the surrounding term and the path to the hole.

    The hole never sits under a `!`: reduction does not enter suspensions.
    """

    surrounding: Term
    hole: Path = ()

    def __post_init__(self) -> None:
        current = self.surrounding
        for position in self.hole:
            if isinstance(current, Bang):
                raise ValueError(f"Context hole at {self.hole} lies under a suspension")
            current = current.children()[position]

    @classmethod
    def empty(cls) -> TermContext:
        return cls(PLACEHOLDER)

    def plug(self, term: Term) -> Term:
        return replace_at(self.surrounding, self.hole, term)

    @property
    def is_evaluation_context(self) -> bool:
        """Whether the hole is reached through applications only, as CBV contexts are."""
        current = self.surrounding
        for position in self.hole:
            if not isinstance(current, App):
                return False
            current = current.children()[position]
        return True

    @classmethod
    def decompose(cls, term: Term, calculus: Calculus) -> tuple[TermContext, Term] | None:
        """Split `term` into `C[redex]` along the call-by-value strategy.

        Returns:
            The context and the redex, or None when no rule applies.
        """
        rule = select_redex(term, calculus)
        if rule.tag is RuleTag.ID:
            return None
        return cls(replace_at(term, rule.path, PLACEHOLDER), rule.path), subterm_at(
            term, rule.path
        )


class RegisterState:
    """A superposition of congruent register terms, without a history track."""

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes: Mapping[Term, complex]) -> None:
        self._amplitudes = dict(amplitudes)

    @classmethod
    def single(cls, term: Term) -> RegisterState:
        return cls({term: 1.0 + 0j})

    @classmethod
    def from_superposition(cls, state: Superposition) -> RegisterState:
        """Drop the history track, which must be empty in every branch."""
        amplitudes: dict[Term, complex] = {}
        for config, amplitude in state.items():
            if len(config.history):
                raise ValueError("A register state cannot carry history frames")
            amplitudes[config.register] = amplitudes.get(config.register, 0j) + amplitude
        return cls(amplitudes)

    def to_superposition(self) -> Superposition:
        return Superposition.from_pairs(
            (Configuration(EMPTY_HISTORY, term), amplitude)
            for term, amplitude in self._amplitudes.items()
        )

    @property
    def amplitudes(self) -> Mapping[Term, complex]:
        return MappingProxyType(self._amplitudes)

    @property
    def shape(self) -> Term:
        if not self._amplitudes:
            raise ValueError("Empty register state has no shape")
        return next(iter(self._amplitudes))

    def items(self) -> Iterable[tuple[Term, complex]]:
        return self._amplitudes.items()

    def __iter__(self) -> Iterator[Term]:
        return iter(self._amplitudes)

    def __len__(self) -> int:
        return len(self._amplitudes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegisterState):
            return NotImplemented
        return self._amplitudes == other._amplitudes

    def __hash__(self) -> int:
        return hash(frozenset(self._amplitudes.items()))

    def __repr__(self) -> str:
        return f"RegisterState({len(self)} branches)"
