"""Named surface syntax produced by the parser, before desugaring and index resolution."""

from __future__ import annotations
from dataclasses import dataclass
from quantum_lambda._compat import StrEnum

from quantum_lambda.syntax.terms import ConstantId


class SugarForm(StrEnum):
    LET_TUPLE = "let-tuple"
    LET_CONS = "let-cons"
    LET_VAR = "let"
    CASE_NAT = "case-nat"
    CASE_LIST = "case-list"
    LIST_LITERAL = "list"
    NAT_LITERAL = "numeral"
    CONS = "cons"
    FIX_FORM = "rec"


class Surface:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class SVar(Surface):
    name: str


@dataclass(frozen=True, slots=True)
class SGlobal(Surface):
    """A reference to a prelude definition that no local binder can capture."""

    name: str


@dataclass(frozen=True, slots=True)
class SConst(Surface):
    constant: ConstantId


@dataclass(frozen=True, slots=True)
class SLam(Surface):
    name: str
    body: Surface
    nonlinear: bool = False


@dataclass(frozen=True, slots=True)
class SApp(Surface):
    fun: Surface
    arg: Surface


@dataclass(frozen=True, slots=True)
class SBang(Surface):
    body: Surface


@dataclass(frozen=True, slots=True)
class SLet(Surface):
    """`let pattern = bound in body`.

    `names` holds one name for LET_VAR (nonlinear when `nonlinear`), the tuple components
    for LET_TUPLE, and (head, tail) for LET_CONS.
    """

    form: SugarForm
    names: tuple[str, ...]
    bound: Surface
    body: Surface
    nonlinear: bool = False


@dataclass(frozen=True, slots=True)
class SCase(Surface):
    """`case scrutinee of (nil -> on_nil, head:tail -> on_cons)` or its numeral analogue.

    For CASE_NAT the successor branch binds only `head` (the predecessor) and `tail` is empty.
    """

    form: SugarForm
    scrutinee: Surface
    on_nil: Surface
    head: str
    tail: str
    on_cons: Surface


@dataclass(frozen=True, slots=True)
class SList(Surface):
    items: tuple[Surface, ...]


@dataclass(frozen=True, slots=True)
class SCons(Surface):
    head: Surface
    tail: Surface


@dataclass(frozen=True, slots=True)
class SNat(Surface):
    value: int


@dataclass(frozen=True, slots=True)
class SRec(Surface):
    name: str
    body: Surface


SUGAR_NODES = (SLet, SCase, SList, SCons, SNat, SRec)


def surface_names(node: Surface) -> set[str]:
    """Every identifier spelled anywhere in `node`, bound or free."""
    names: set[str] = set()
    stack: list[Surface] = [node]
    while stack:
        current = stack.pop()
        match current:
            case SVar(name):
                names.add(name)
            case SLam(name, body, _):
                names.add(name)
                stack.append(body)
            case SApp(fun, arg):
                stack.extend((fun, arg))
            case SBang(body):
                stack.append(body)
            case SLet(_, bound_names, bound, body, _):
                names.update(bound_names)
                stack.extend((bound, body))
            case SCase(_, scrutinee, on_nil, head, tail, on_cons):
                names.update(n for n in (head, tail) if n)
                stack.extend((scrutinee, on_nil, on_cons))
            case SList(items):
                stack.extend(items)
            case SCons(head, tail):
                stack.extend((head, tail))
            case SRec(name, body):
                names.add(name)
                stack.append(body)
    return names


def surface_free(node: Surface) -> set[str]:
    """Names occurring free in `node`, looking through sugar binders."""
    match node:
        case SVar(name):
            return {name}
        case SLam(name, body, _) | SRec(name, body):
            return surface_free(body) - {name}
        case SApp(fun, arg):
            return surface_free(fun) | surface_free(arg)
        case SBang(body):
            return surface_free(body)
        case SLet(_, bound_names, bound, body, _):
            return surface_free(bound) | (surface_free(body) - set(bound_names))
        case SCase(_, scrutinee, on_nil, head, tail, on_cons):
            branch = surface_free(on_cons) - {head, tail}
            return surface_free(scrutinee) | surface_free(on_nil) | branch
        case SList(items):
            return set().union(*(surface_free(item) for item in items))
        case SCons(head, tail):
            return surface_free(head) | surface_free(tail)
    return set()
