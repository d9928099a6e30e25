"""Pretty printer producing concrete syntax with minimal parentheses.

Applications associate to the left and abstractions extend as far right as possible. An
abstraction in argument position is always parenthesized, so a banged abstraction prints
as `!(\\x.x)`. Bound names come from hints and are primed when they would capture.
"""

from __future__ import annotations
from enum import Enum, auto

from quantum_lambda.syntax.operations import free_names
from quantum_lambda.syntax.parser import KEYWORDS, LOWERCASE_CONSTANTS
from quantum_lambda.syntax.terms import (
    App,
    Bang,
    BangLam,
    Const,
    ErasedLam,
    Free,
    Lam,
    Placeholder,
    Term,
    Var,
)

PHI = "φ"


class _Position(Enum):
    TOP = auto()
    FUN = auto()
    ARG = auto()


def pretty(term: Term) -> str:
    """Render `term` in concrete syntax; `parse(pretty(t)) == t` for placeholder-free terms."""
    reserved = free_names(term) | KEYWORDS | LOWERCASE_CONSTANTS
    return _render(term, [], reserved, _Position.TOP)


def _fresh(hint: str, scope: list[str], reserved: set[str]) -> str:
    name = hint if hint and (hint[0].islower() or hint[0] == "_") else "x"
    while name in reserved or name in scope:
        name += "'"
    return name


def _render(term: Term, scope: list[str], reserved: set[str], position: _Position) -> str:
    match term:
        case Var(index):
            if index < len(scope):
                return scope[-1 - index]
            return f"#{index}"
        case Free(name):
            return name
        case Const(constant):
            return constant.value
        case Placeholder():
            return PHI
        case Lam(body, hint) | BangLam(body, hint):
            name = _fresh(hint, scope, reserved)
            marker = "\\!" if isinstance(term, BangLam) else "\\"
            scope.append(name)
            inner = _render(body, scope, reserved, _Position.TOP)
            scope.pop()
            text = f"{marker}{name}.{inner}"
            return text if position is _Position.TOP else f"({text})"
        case ErasedLam(body):
            scope.append(PHI)
            inner = _render(body, scope, reserved, _Position.TOP)
            scope.pop()
            text = f"{PHI}.{inner}"
            return text if position is _Position.TOP else f"({text})"
        case App(fun, arg):
            text = (
                f"{_render(fun, scope, reserved, _Position.FUN)} "
                f"{_render(arg, scope, reserved, _Position.ARG)}"
            )
            return f"({text})" if position is _Position.ARG else text
        case Bang(body):
            return "!" + _render(body, scope, reserved, _Position.ARG)
    raise TypeError(f"Cannot print {term!r}")
