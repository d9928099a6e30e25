"""Structural operations on nameless terms: shifting, substitution, erasure, congruence."""

from __future__ import annotations
from collections.abc import Callable, Iterator

from quantum_lambda.syntax.terms import (
    PLACEHOLDER,
    App,
    Bang,
    BangLam,
    Calculus,
    Const,
    ConstantId,
    ErasedLam,
    Free,
    Lam,
    Path,
    Placeholder,
    Term,
    Var,
    is_bit,
)


def shift(term: Term, amount: int, cutoff: int = 0) -> Term:
    """Add `amount` to every free index >= `cutoff`."""
    if amount == 0 or term.free_limit <= cutoff:
        return term
    match term:
        case Var(index, hint):
            return Var(index + amount, hint) if index >= cutoff else term
        case Lam(body, hint):
            return Lam(shift(body, amount, cutoff + 1), hint)
        case BangLam(body, hint):
            return BangLam(shift(body, amount, cutoff + 1), hint)
        case ErasedLam(body):
            return ErasedLam(shift(body, amount, cutoff + 1))
        case App(fun, arg):
            return App(shift(fun, amount, cutoff), shift(arg, amount, cutoff))
        case Bang(body):
            return Bang(shift(body, amount, cutoff))
    return term


def substitute(body: Term, value: Term) -> Term:
    """Instantiate index 0 of an abstraction body with `value`, i.e. `body[value/x]`.

    Args:
        body: Body of the abstraction whose binder is being instantiated.
        value: Closed or open term put in place of the binder; it is shifted under binders.

    Returns:
        The body with the binder removed and remaining free indices lowered by one.
    """
    return _substitute(body, 0, value)


def _substitute(term: Term, depth: int, value: Term) -> Term:
    if term.free_limit <= depth:
        return term
    match term:
        case Var(index, hint):
            if index == depth:
                return shift(value, depth)
            return Var(index - 1, hint) if index > depth else term
        case Lam(body, hint):
            return Lam(_substitute(body, depth + 1, value), hint)
        case BangLam(body, hint):
            return BangLam(_substitute(body, depth + 1, value), hint)
        case ErasedLam(body):
            return ErasedLam(_substitute(body, depth + 1, value))
        case App(fun, arg):
            return App(_substitute(fun, depth, value), _substitute(arg, depth, value))
        case Bang(body):
            return Bang(_substitute(body, depth, value))
    return term


def occurs(term: Term, index: int = 0) -> bool:
    """Whether the variable with De Bruijn index `index` occurs free in `term`."""
    if term.free_limit <= index:
        return False
    match term:
        case Var(i):
            return i == index
        case Lam(body) | BangLam(body) | ErasedLam(body):
            return occurs(body, index + 1)
        case App(fun, arg):
            return occurs(fun, index) or occurs(arg, index)
        case Bang(body):
            return occurs(body, index)
    return False


def erase_keep(term: Term, binder: int = 0) -> Term:
    """Replace every maximal subterm not containing the binder by the placeholder φ.

    Occurrences of the binder are kept, abstractions on the way to one become the erased
    binder slot `φ.`, and applications and suspensions keep their structure.

    Args:
        term: An abstraction body.
        binder: De Bruijn index of the kept variable inside `term` (0 for the nearest binder).

    Returns:
        The erased term.
    """
    erased, found = _erase(term, binder)
    return erased if found else PLACEHOLDER


def _erase(term: Term, index: int) -> tuple[Term, bool]:
    if term.free_limit <= index:
        return PLACEHOLDER, False
    match term:
        case Var(i):
            return (term, True) if i == index else (PLACEHOLDER, False)
        case Lam(body) | BangLam(body) | ErasedLam(body):
            inner, found = _erase(body, index + 1)
            return (ErasedLam(inner), True) if found else (PLACEHOLDER, False)
        case App(fun, arg):
            left, found_left = _erase(fun, index)
            right, found_right = _erase(arg, index)
            if found_left or found_right:
                return App(left, right), True
            return PLACEHOLDER, False
        case Bang(body):
            inner, found = _erase(body, index)
            return (Bang(inner), True) if found else (PLACEHOLDER, False)
    return PLACEHOLDER, False


class UneraseMismatch(ValueError):
    """An erased pattern does not fit the term it is matched against."""


def unerase(pattern: Term, contractum: Term) -> tuple[Term, Term | None]:
    """Invert `substitute(body, v)` given the erased body `erase_keep(body)`.

    Args:
        pattern: The erased body recorded in a history frame.
        contractum: The result of the substitution.

    Returns:
        The original body and the substituted value (None when the binder did not occur).

    Raises:
        UneraseMismatch: If the pattern and the contractum disagree in shape.
    """
    values: list[Term] = []
    body = _unerase(pattern, contractum, 0, values)
    if any(v != values[0] for v in values[1:]):
        raise UneraseMismatch("Binder occurrences recover different values")
    return body, values[0] if values else None


def _unerase(pattern: Term, contractum: Term, depth: int, values: list[Term]) -> Term:
    match pattern, contractum:
        case Placeholder(), _:
            return shift(contractum, 1, depth)
        case Var(index, hint), _ if index == depth:
            values.append(shift(contractum, -depth))
            return Var(depth, hint)
        case ErasedLam(body), Lam(inner, hint):
            return Lam(_unerase(body, inner, depth + 1, values), hint)
        case ErasedLam(body), BangLam(inner, hint):
            return BangLam(_unerase(body, inner, depth + 1, values), hint)
        case App(fun, arg), App(cfun, carg):
            return App(
                _unerase(fun, cfun, depth, values),
                _unerase(arg, carg, depth, values),
            )
        case Bang(body), Bang(inner):
            return Bang(_unerase(body, inner, depth, values))
    raise UneraseMismatch(f"Erased pattern {pattern!r} does not match {contractum!r}")


def congruent(first: Term, second: Term) -> bool:
    """True iff both terms have the same shape and differ at most at bit leaves."""
    if first is second:
        return True
    if is_bit(first) and is_bit(second):
        return True
    if type(first) is not type(second):
        return False
    match first, second:
        case Var(i), Var(j):
            return i == j
        case Free(a), Free(b):
            return a == b
        case Const(a), Const(b):
            return a == b
        case App(f1, a1), App(f2, a2):
            return congruent(f1, f2) and congruent(a1, a2)
        case (Lam(b1), Lam(b2)) | (BangLam(b1), BangLam(b2)) | (ErasedLam(b1), ErasedLam(b2)):
            return congruent(b1, b2)
        case Bang(b1), Bang(b2):
            return congruent(b1, b2)
        case Placeholder(), Placeholder():
            return True
    return False


def is_value(term: Term, calculus: Calculus) -> bool:
    """Classify `term` against the value grammar of `calculus`.

    Variables, constants and abstractions are values in both calculi. λ_q adds `!`-suspensions
    and the partially applied conditional phase `cphase !n`.
    """
    match term:
        case Var() | Free() | Const() | Lam() | BangLam():
            return True
        case Bang():
            return calculus is Calculus.Q
        case App(Const(ConstantId.CPHASE), Bang()):
            return calculus is Calculus.Q
    return False


def subterm_at(term: Term, path: Path) -> Term:
    for step in path:
        term = term.children()[step]
    return term


def replace_at(term: Term, path: Path, replacement: Term) -> Term:
    """Rebuild `term` with the subterm at `path` replaced."""
    if not path:
        return replacement
    head, rest = path[0], path[1:]
    match term:
        case App(fun, arg):
            if head == 0:
                return App(replace_at(fun, rest, replacement), arg)
            return App(fun, replace_at(arg, rest, replacement))
        case Lam(body, hint):
            return Lam(replace_at(body, rest, replacement), hint)
        case BangLam(body, hint):
            return BangLam(replace_at(body, rest, replacement), hint)
        case ErasedLam(body):
            return ErasedLam(replace_at(body, rest, replacement))
        case Bang(body):
            return Bang(replace_at(body, rest, replacement))
    raise ValueError(f"Path {path} does not address a subterm of {term!r}")


def iter_subterms(term: Term, path: Path = ()) -> Iterator[tuple[Path, Term]]:
    """Pre-order walk yielding (path, subterm) pairs."""
    stack = [(path, term)]
    while stack:
        current_path, current = stack.pop()
        yield current_path, current
        children = current.children()
        for position in range(len(children) - 1, -1, -1):
            stack.append((current_path + (position,), children[position]))


def bit_slots(term: Term) -> list[Path]:
    """Paths of all bit-constant leaves in pre-order."""
    return [path for path, sub in iter_subterms(term) if is_bit(sub)]


def contains_bang(term: Term) -> bool:
    return any(isinstance(sub, Bang | BangLam) for _, sub in iter_subterms(term))


def free_names(term: Term) -> set[str]:
    return {sub.name for _, sub in iter_subterms(term) if isinstance(sub, Free)}


def replace_free(term: Term, lookup: Callable[[str], Term | None]) -> Term:
    """Replace each `Free` name for which `lookup` returns a closed term."""
    match term:
        case Free(name):
            found = lookup(name)
            return term if found is None else found
        case Lam(body, hint):
            return Lam(replace_free(body, lookup), hint)
        case BangLam(body, hint):
            return BangLam(replace_free(body, lookup), hint)
        case ErasedLam(body):
            return ErasedLam(replace_free(body, lookup))
        case App(fun, arg):
            return App(replace_free(fun, lookup), replace_free(arg, lookup))
        case Bang(body):
            return Bang(replace_free(body, lookup))
    return term
