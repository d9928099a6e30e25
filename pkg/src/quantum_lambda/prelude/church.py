"""Builders and decoders for the Church encodings, and the program entry point."""

from __future__ import annotations
from collections.abc import Sequence
from dataclasses import dataclass

from quantum_lambda.machine import normalize_definite
from quantum_lambda.prelude.definition_service import DefinitionService
from quantum_lambda.prelude.desugar import Desugarer
from quantum_lambda.syntax.operations import shift
from quantum_lambda.syntax.parser import parse, resolve
from quantum_lambda.syntax.shapes import list_items, read_nat
from quantum_lambda.syntax.terms import (
    App,
    Bang,
    BangLam,
    Calculus,
    Const,
    Lam,
    Term,
    apps,
)

_service = DefinitionService()


def definitions() -> DefinitionService:
    """The shared service backing `parse_program` and the builders below."""
    return _service


def parse_program(source: str, calculus: Calculus = Calculus.Q) -> Term:
    """Parse, desugar and expand a program against the prelude of `calculus`.

    Raises:
        TermSyntaxError: On malformed input.
        DefinitionError: If the prelude definitions it uses are inconsistent.
    """
    term = parse(source, Desugarer(calculus))
    return _service.expand(term, calculus)


def prelude_term(name: str, calculus: Calculus = Calculus.Q) -> Term:
    return _service.term(name, calculus)


def church_nat(n: int, calculus: Calculus = Calculus.Q) -> Term:
    """The numeral n̄ in value form.

    Raises:
        ValueError: If `n` is negative.
    """
    if n < 0:
        raise ValueError(f"Church numerals are natural numbers, got {n}")
    return _service.expand(resolve(Desugarer(calculus).numeral(n)), calculus)


@dataclass(frozen=True)
class NatOps:
    suc: Term
    pred: Term
    add: Term


def nat_ops(calculus: Calculus = Calculus.Q) -> NatOps:
    return NatOps(
        suc=prelude_term("suc", calculus),
        pred=prelude_term("pred", calculus),
        add=prelude_term("add", calculus),
    )


@dataclass(frozen=True)
class ListOps:
    """List constructors of one calculus plus term-level tuple and case builders."""

    calculus: Calculus
    empty: Term
    cons: Term

    def tuple(self, items: Sequence[Term]) -> Term:
        """`(x1, ..., xn)` as `cons x1 (... (cons xn empty))`."""
        chain = self.empty
        for item in reversed(items):
            chain = apps(self.cons, item, chain)
        return chain

    def case(self, scrutinee: Term, on_nil: Term, on_cons: Term) -> Term:
        """`case scrutinee of (empty -> on_nil, h:t -> on_cons)`.

        `on_cons` sees the head as index 1 and the tail as index 0. Linear variables free in
        the branches are not threaded through; use the surface sugar for that.
        """
        if self.calculus is Calculus.I:
            return apps(scrutinee, Lam(shift(on_nil, 1), "z"), Lam(Lam(on_cons, "t"), "h"))
        nil = Bang(BangLam(shift(on_nil, 1), "z"))
        return apps(scrutinee, nil, Bang(Lam(Lam(on_cons, "t"), "h")))


def list_ops(calculus: Calculus = Calculus.Q) -> ListOps:
    return ListOps(calculus, prelude_term("empty", calculus), prelude_term("cons", calculus))


def fix(calculus: Calculus = Calculus.Q) -> Term:
    return prelude_term("fix", calculus)


def combinators(calculus: Calculus = Calculus.Q) -> dict[str, Term]:
    """map, append and reverse (only map exists classically)."""
    names = ("map", "append", "reverse") if calculus is Calculus.Q else ("map",)
    return {name: prelude_term(name, calculus) for name in names}


def decode_nat(term: Term, calculus: Calculus = Calculus.Q) -> int | None:
    """Read a numeral, evaluating suspended predecessors on the way."""
    return read_nat(term, lambda t: normalize_definite(t, calculus))


def decode_list(term: Term, calculus: Calculus = Calculus.Q) -> list[Term] | None:
    """Items of a list value, or None when `term` does not normalize to one."""
    value = normalize_definite(term, calculus)
    if value is None:
        return None
    items = list_items(value)
    return None if items is None else [item for _, item in items]


def decode_bits(term: Term, calculus: Calculus = Calculus.Q) -> list[int] | None:
    """Bits of a list of bit constants, first item first."""
    items = decode_list(term, calculus)
    if items is None or not all(isinstance(i, Const) and i.constant.is_bit for i in items):
        return None
    return [item.constant.bit for item in items if isinstance(item, Const)]


def is_fix_unfolding(term: Term, argument: Term) -> bool:
    """Whether `term` is exactly `t !(fix !t)` for `t = argument`."""
    return term == App(argument, Bang(App(fix(Calculus.Q), Bang(argument))))
