"""Syntax-directed well-formedness check for λ_q.

Weakening, contraction and dereliction are admissible, so a derivation exists exactly when
every linearly bound variable occurs once in its scope and no occurrence of a linear
variable sits inside a `!` entered below its binder.
"""

from __future__ import annotations
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from quantum_lambda._compat import StrEnum

from pydantic import BaseModel, ConfigDict, Field

from quantum_lambda.syntax.terms import (
    App,
    Bang,
    BangLam,
    ErasedLam,
    Free,
    Lam,
    Path,
    Term,
    Var,
)

logger = logging.getLogger(__name__)


class Linearity(StrEnum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


class ViolationKind(StrEnum):
    LINEAR_USED_ZERO = "LinearUsedZero"
    LINEAR_USED_MANY = "LinearUsedMany"
    LINEAR_UNDER_BANG = "LinearUnderBang"
    DUPLICATE_BINDER = "DuplicateBinder"


class Violation(BaseModel):
    """One failed well-formedness condition, pinned to a single subterm."""

    model_config = ConfigDict(frozen=True)

    kind: ViolationKind = Field(..., description="Which condition failed")
    path: Path = Field(..., description="Child positions from the root to the subterm")
    binder: str = Field(..., description="Display name of the variable concerned")


class LinearUse(BaseModel):
    model_config = ConfigDict(frozen=True)

    count: int
    under_bang: bool


@dataclass(frozen=True)
class CheckContext:
    """Ambient assumptions for the free names of a term (the x and !x of a context)."""

    entries: tuple[tuple[str, Linearity], ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, Linearity]] = ()) -> CheckContext:
        return cls(tuple(pairs))

    def duplicates(self) -> list[str]:
        seen: set[str] = set()
        repeated: list[str] = []
        for name, _ in self.entries:
            if name in seen and name not in repeated:
                repeated.append(name)
            seen.add(name)
        return repeated

    def linearity(self, name: str) -> Linearity | None:
        for bound, linearity in self.entries:
            if bound == name:
                return linearity
        return None

    def is_disjoint(self, other: CheckContext) -> bool:
        return not {n for n, _ in self.entries} & {n for n, _ in other.entries}

    def join(self, other: CheckContext) -> CheckContext:
        if not self.is_disjoint(other):
            raise ValueError("Contexts may only be joined when disjoint")
        return CheckContext(self.entries + other.entries)


@dataclass
class _Binding:
    name: str
    linearity: Linearity
    bang_depth: int
    path: Path
    uses: int = 0


def check_well_formed(term: Term, context: CheckContext | None = None) -> list[Violation]:
    """Check `term` against the linear well-formedness rules.

    Args:
        term: The term to check; free `Free` names are looked up in `context` and otherwise
            treated as nonlinear constants.
        context: Optional ambient assumptions for free names.

    Returns:
        The violations in discovery order; an empty list means well-formed.
    """
    context = context or CheckContext()
    violations = [
        Violation(kind=ViolationKind.DUPLICATE_BINDER, path=(), binder=name)
        for name in context.duplicates()
    ]
    ambient = {
        name: _Binding(name, linearity, 0, ())
        for name, linearity in context.entries
        if name not in context.duplicates()
    }
    stack: list[_Binding] = []
    _walk(term, (), 0, stack, ambient, violations)
    for binding in ambient.values():
        if binding.linearity is Linearity.LINEAR and binding.uses == 0:
            violations.append(
                Violation(kind=ViolationKind.LINEAR_USED_ZERO, path=(), binder=binding.name)
            )
    if violations:
        logger.debug("Term has %d linearity violations", len(violations))
    return violations


def is_well_formed(term: Term, context: CheckContext | None = None) -> bool:
    return not check_well_formed(term, context)


def _use(binding: _Binding, path: Path, bang_depth: int, violations: list[Violation]) -> None:
    binding.uses += 1
    if binding.linearity is not Linearity.LINEAR:
        return
    if binding.uses == 2:
        violations.append(
            Violation(kind=ViolationKind.LINEAR_USED_MANY, path=path, binder=binding.name)
        )
    if bang_depth > binding.bang_depth:
        violations.append(
            Violation(kind=ViolationKind.LINEAR_UNDER_BANG, path=path, binder=binding.name)
        )


def _walk(
    term: Term,
    path: Path,
    bang_depth: int,
    stack: list[_Binding],
    ambient: dict[str, _Binding],
    violations: list[Violation],
) -> None:
    match term:
        case Var(index, hint):
            if index < len(stack):
                _use(stack[-1 - index], path, bang_depth, violations)
            else:
                logger.debug("Open variable %s at %s treated as nonlinear", hint, path)
        case Free(name):
            if name in ambient:
                _use(ambient[name], path, bang_depth, violations)
        case Lam(body, hint) | BangLam(body, hint):
            linearity = Linearity.LINEAR if isinstance(term, Lam) else Linearity.NONLINEAR
            binding = _Binding(hint, linearity, bang_depth, path)
            stack.append(binding)
            _walk(body, path + (0,), bang_depth, stack, ambient, violations)
            stack.pop()
            if linearity is Linearity.LINEAR and binding.uses == 0:
                violations.append(
                    Violation(kind=ViolationKind.LINEAR_USED_ZERO, path=path, binder=hint)
                )
        case ErasedLam(body):
            stack.append(_Binding("φ", Linearity.NONLINEAR, bang_depth, path))
            _walk(body, path + (0,), bang_depth, stack, ambient, violations)
            stack.pop()
        case App(fun, arg):
            _walk(fun, path + (0,), bang_depth, stack, ambient, violations)
            _walk(arg, path + (1,), bang_depth, stack, ambient, violations)
        case Bang(body):
            _walk(body, path + (0,), bang_depth + 1, stack, ambient, violations)


def free_linear_uses(term: Term) -> dict[str, LinearUse]:
    """Count occurrences of the free variables of `term`.

    Dangling indices are reported under their display hint, `Free` names under their name.
    Each entry records whether any occurrence sits under a `!`.
    """
    counts: dict[str, tuple[int, bool]] = {}

    def visit(node: Term, depth: int, under_bang: bool) -> None:
        match node:
            case Var(index, hint) if index >= depth:
                _record(counts, hint, under_bang)
            case Free(name):
                _record(counts, name, under_bang)
            case Lam(body) | BangLam(body) | ErasedLam(body):
                visit(body, depth + 1, under_bang)
            case App(fun, arg):
                visit(fun, depth, under_bang)
                visit(arg, depth, under_bang)
            case Bang(body):
                visit(body, depth, True)

    visit(term, 0, False)
    return {name: LinearUse(count=c, under_bang=b) for name, (c, b) in counts.items()}


def _record(counts: dict[str, tuple[int, bool]], name: str, under_bang: bool) -> None:
    count, seen_under_bang = counts.get(name, (0, False))
    counts[name] = (count + 1, seen_under_bang or under_bang)


def format_path(path: Path) -> str:
    return ".".join(str(step) for step in path) if path else "root"


def format_violation(violation: Violation) -> str:
    """The `path  kind  binder` line printed by `qlam check`."""
    return f"{format_path(violation.path)}  {violation.kind.value}  {violation.binder}"
