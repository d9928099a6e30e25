"""The classical call-by-value lambda calculus and its embedding into λ_q."""

from __future__ import annotations
import logging
from dataclasses import dataclass
from quantum_lambda._compat import StrEnum

from quantum_lambda.syntax.operations import iter_subterms, substitute
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import App, Bang, BangLam, Const, Free, Lam, Term, Var

logger = logging.getLogger(__name__)

# (λ!z. z), which strips the `!` off an embedded operator
_UNBANG = BangLam(Var(0, "z"), "z")


class ClassicalStatus(StrEnum):
    VALUE = "value"
    STUCK = "stuck"
    BUDGET_EXCEEDED = "budget"


@dataclass(frozen=True)
class ClassicalResult:
    status: ClassicalStatus
    term: Term
    steps: int


def is_classical(term: Term) -> bool:
    """Pure λ-terms: variables, free names, abstractions and applications only."""
    return all(isinstance(sub, Var | Free | Lam | App) for _, sub in iter_subterms(term))


def _is_value(term: Term) -> bool:
    return isinstance(term, Var | Free | Lam)


def _step(term: Term) -> Term | None:
    if not isinstance(term, App):
        return None
    if not _is_value(term.fun):
        inner = _step(term.fun)
        return None if inner is None else App(inner, term.arg)
    if not _is_value(term.arg):
        inner = _step(term.arg)
        return None if inner is None else App(term.fun, inner)
    if isinstance(term.fun, Lam):
        return substitute(term.fun.body, term.arg)
    return None


def classical_evaluate(term: Term, max_steps: int = 10_000) -> ClassicalResult:
    """Evaluate a pure λ-term by call-by-value β-reduction.

    Raises:
        ValueError: If `term` is not a pure λ-term or the budget is below 1.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be at least 1, got {max_steps}")
    if not is_classical(term):
        raise ValueError(f"Not a classical term: {pretty(term)}")
    for count in range(max_steps):
        if _is_value(term):
            return ClassicalResult(ClassicalStatus.VALUE, term, count)
        reduced = _step(term)
        if reduced is None:
            return ClassicalResult(ClassicalStatus.STUCK, term, count)
        term = reduced
    if _is_value(term):
        return ClassicalResult(ClassicalStatus.VALUE, term, max_steps)
    return ClassicalResult(ClassicalStatus.BUDGET_EXCEEDED, term, max_steps)


def embed_classical(term: Term) -> Term:
    """Translate a pure λ-term into λ_q so that every argument is a suspension.

        x* = !x      (λx. t)* = !(λ!x. t*)      (t₁ t₂)* = ((λ!z. z) t₁*) t₂*

    Free names are treated like variables.

    Raises:
        ValueError: If `term` contains quantum constants or λ_q constructs.
    """
    match term:
        case Var() | Free():
            return Bang(term)
        case Lam(body, hint):
            return Bang(BangLam(embed_classical(body), hint))
        case App(fun, arg):
            return App(App(_UNBANG, embed_classical(fun)), embed_classical(arg))
        case Const(constant):
            raise ValueError(f"Quantum constant {constant.value} has no classical embedding")
    raise ValueError(f"Not a classical term: {pretty(term)}")
