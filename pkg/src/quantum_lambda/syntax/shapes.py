"""Readers for the value shapes of the standard Church encodings.

Lists and numerals are recognized structurally, whichever binder kind (linear, nonlinear)
the encoding uses, so the same readers serve both calculi:

    empty  = \\x.\\y. x id            zero  = \\x.\\y. x id
    h : t  = \\x.\\y. y h t           suc n = \\x.\\y. y n      (n possibly banged)
"""

from __future__ import annotations
from collections.abc import Callable

from quantum_lambda.syntax.terms import App, Bang, BangLam, Lam, Path, Term, Var

# Normalizes a definite term to a value, or returns None when it cannot.
Normalizer = Callable[[Term], Term | None]

_HEAD: Path = (0, 0, 0, 1)
_TAIL: Path = (0, 0, 1)


def _two_binder_body(term: Term) -> Term | None:
    match term:
        case Lam(Lam(body) | BangLam(body)) | BangLam(Lam(body) | BangLam(body)):
            return body
    return None


def is_empty_value(term: Term) -> bool:
    body = _two_binder_body(term)
    return isinstance(body, App) and body.fun == Var(1)


def cons_parts(term: Term) -> tuple[Term, Term] | None:
    """Split a cons value into (head, tail), or None if `term` is not one."""
    match _two_binder_body(term):
        case App(App(Var(0), head), tail):
            return head, tail
    return None


def list_items(term: Term, limit: int | None = None) -> list[tuple[Path, Term]] | None:
    """Read a fully built list value into (path, item) pairs.

    Args:
        term: Candidate list value.
        limit: Stop with None once more than `limit` items are seen.

    Returns:
        The items with their paths relative to `term`, or None when `term` is not a list value.
    """
    items: list[tuple[Path, Term]] = []
    prefix: Path = ()
    while True:
        if is_empty_value(term):
            return items
        parts = cons_parts(term)
        if parts is None:
            return None
        head, term = parts
        items.append((prefix + _HEAD, head))
        prefix = prefix + _TAIL
        if limit is not None and len(items) > limit:
            return None


def nat_predecessor(term: Term) -> tuple[bool, Term | None] | None:
    """Classify a numeral value.

    Returns:
        (True, None) for zero, (False, predecessor) for a successor, or None otherwise. The
        predecessor is returned unwrapped from its `!` when banged.
    """
    match _two_binder_body(term):
        case App(Var(1), _):
            return True, None
        case App(Var(0), Bang(inner)):
            return False, inner
        case App(Var(0), inner):
            return False, inner
    return None


def read_nat(term: Term, normalize: Normalizer, limit: int = 4096) -> int | None:
    """Decode a Church numeral, normalizing it and each suspended predecessor with `normalize`."""
    count = 0
    current = normalize(term)
    while current is not None and count <= limit:
        shape = nat_predecessor(current)
        if shape is None:
            return None
        is_zero, predecessor = shape
        if is_zero:
            return count
        count += 1
        current = normalize(predecessor) if predecessor is not None else None
    return None
