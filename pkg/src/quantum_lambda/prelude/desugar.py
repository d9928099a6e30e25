"""Rewriting of surface sugar into core syntax for either calculus.

λ_q follows the linear list encoding, where both deconstructor arguments are suspended:

    case e of (empty -> a, h:t -> b)   =>   e !(\\!z. \\v... a) !(\\h.\\t. \\v... b) v...

The linear variables free in the branches (`v...`) cannot appear under `!`, so they are
passed through as trailing arguments and rebound inside each branch. Numeral cases are the
same with a nonlinear predecessor binder `\\!m`. λ_i uses the plain classical encoding
`e (\\z. a) (\\h.\\t. b)`.
"""

from __future__ import annotations
import logging
from collections.abc import Sequence

from quantum_lambda.machine import CalculusError
from quantum_lambda.syntax.parser import TermSyntaxError
from quantum_lambda.syntax.surface import (
    SApp,
    SBang,
    SCase,
    SCons,
    SGlobal,
    SLam,
    SLet,
    SList,
    SNat,
    SRec,
    SugarForm,
    Surface,
    SVar,
    surface_free,
    surface_names,
)
from quantum_lambda.syntax.terms import Calculus

logger = logging.getLogger(__name__)

# Scope of a desugaring step: name -> whether the binder is linear.
Scope = dict[str, bool]


def _apply(fun: Surface, *args: Surface) -> Surface:
    for arg in args:
        fun = SApp(fun, arg)
    return fun


def _lambdas(names: Sequence[str], body: Surface) -> Surface:
    for name in reversed(names):
        body = SLam(name, body)
    return body


class Desugarer:
    """Callable passed to `syntax.parse` that removes every sugar node from a program."""

    def __init__(self, calculus: Calculus) -> None:
        self.calculus = calculus
        self._avoid: set[str] = set()
        self._counter = 0

    def __call__(self, node: Surface) -> Surface:
        self._avoid = surface_names(node)
        self._counter = 0
        return self._desugar(node, {})

    def _fresh(self) -> str:
        while True:
            self._counter += 1
            name = f"_u{self._counter}"
            if name not in self._avoid:
                self._avoid.add(name)
                return name

    def _desugar(self, node: Surface, scope: Scope) -> Surface:
        match node:
            case SLam(name, body, nonlinear):
                return SLam(name, self._desugar(body, {**scope, name: not nonlinear}), nonlinear)
            case SApp(fun, arg):
                return SApp(self._desugar(fun, scope), self._desugar(arg, scope))
            case SBang(body):
                return SBang(self._desugar(body, scope))
            case SNat(value):
                return self.numeral(value)
            case SList(items):
                return self._desugar(self._cons_chain(items), scope)
            case SCons(head, tail):
                head, tail = self._desugar(head, scope), self._desugar(tail, scope)
                return _apply(SGlobal("cons"), head, tail)
            case SRec(name, body):
                return self._rec(name, body, scope)
            case SLet():
                return self._let(node, scope)
            case SCase():
                return self._case(node, scope)
        return node

    def numeral(self, value: int) -> Surface:
        """The Church numeral `value` in value form."""
        nonlinear = self.calculus is Calculus.Q
        term: Surface = _apply(SVar("x"), self._suspend(SGlobal("id")))
        term = SLam("x", SLam("y", term, nonlinear), nonlinear)
        for _ in range(value):
            body = _apply(SVar("y"), self._suspend(term))
            term = SLam("x", SLam("y", body, nonlinear), nonlinear)
        return term

    def _suspend(self, node: Surface) -> Surface:
        return SBang(node) if self.calculus is Calculus.Q else node

    def _cons_chain(self, items: Sequence[Surface]) -> Surface:
        chain: Surface = SGlobal("empty")
        for item in reversed(items):
            chain = SCons(item, chain)
        return chain

    def _rec(self, name: str, body: Surface, scope: Scope) -> Surface:
        inner = self._desugar(body, {**scope, name: False})
        if self.calculus is Calculus.Q:
            return SApp(SGlobal("fix"), SBang(SLam(name, inner, nonlinear=True)))
        return SApp(SGlobal("fix"), SLam(name, inner))

    def _let(self, node: SLet, scope: Scope) -> Surface:
        match node.form:
            case SugarForm.LET_VAR:
                (name,) = node.names
                if node.nonlinear:
                    if self.calculus is Calculus.I:
                        raise CalculusError("λ_i programs may not use let !")
                    binder = SLam(name, node.body, nonlinear=True)
                    return self._desugar(SApp(binder, SBang(node.bound)), scope)
                return self._desugar(SApp(SLam(name, node.body), node.bound), scope)
            case SugarForm.LET_CONS:
                head, tail = node.names
                carried = self._carried(node.body, set(node.names), scope)
                junk = self._junk(carried)
                case = SCase(SugarForm.CASE_LIST, node.bound, junk, head, tail, node.body)
                return self._desugar(case, scope)
            case SugarForm.LET_TUPLE:
                carried = self._carried(node.body, set(node.names), scope)
                matcher = self._destructure(node.bound, node.names, node.body, carried)
                return self._desugar(matcher, scope)
        raise ValueError(f"Unsupported let form {node.form}")

    def _carried(self, body: Surface, bound: set[str], scope: Scope) -> list[str]:
        return sorted(name for name in surface_free(body) - bound if scope.get(name, False))

    def _junk(self, names: Sequence[str]) -> Surface:
        """A branch that cannot be taken; in λ_q it still consumes every linear name once."""
        if self.calculus is Calculus.I:
            return SGlobal("empty")
        return SList(tuple(SVar(name) for name in names))

    def _destructure(
        self,
        scrutinee: Surface,
        names: Sequence[str],
        body: Surface,
        carried: list[str],
        bound: Sequence[str] = (),
    ) -> Surface:
        """Match `scrutinee` against the tuple `names`; the tail after them must be empty."""
        first, rest = names[0], names[1:]
        tail = self._fresh()
        matched = [*bound, first]
        if rest:
            on_cons = self._destructure(SVar(tail), rest, body, carried, matched)
        elif self.calculus is Calculus.Q:
            head, remainder = self._fresh(), self._fresh()
            junk = self._junk([head, remainder, *matched, *carried])
            on_cons = SCase(SugarForm.CASE_LIST, SVar(tail), body, head, remainder, junk)
        else:
            on_cons = body
        on_nil = self._junk([*bound, *carried])
        return SCase(SugarForm.CASE_LIST, scrutinee, on_nil, first, tail, on_cons)

    def _case(self, node: SCase, scope: Scope) -> Surface:
        scrutinee = self._desugar(node.scrutinee, scope)
        is_list = node.form is SugarForm.CASE_LIST
        binders = [node.head, node.tail] if is_list else [node.head]
        zero = self._fresh()
        if self.calculus is Calculus.I:
            on_nil = SLam(zero, self._desugar(node.on_nil, scope))
            inner = self._desugar(node.on_cons, {**scope, **dict.fromkeys(binders, False)})
            return _apply(scrutinee, on_nil, _lambdas(binders, inner))

        both = SCase(node.form, SGlobal("empty"), node.on_nil, node.head, node.tail, node.on_cons)
        carried = self._carried(both, set(), scope)
        shadowed = set(binders) & set(carried)
        if shadowed:
            raise TermSyntaxError(
                f"case binder {sorted(shadowed)[0]!r} shadows a linear variable of the other branch"
            )
        carried_scope = dict.fromkeys(carried, True)
        nil_body = self._desugar(node.on_nil, {**scope, **carried_scope})
        on_nil = SLam(zero, _lambdas(carried, nil_body), nonlinear=True)
        cons_scope = {**scope, **dict.fromkeys(binders, is_list), **carried_scope}
        inner = _lambdas(carried, self._desugar(node.on_cons, cons_scope))
        on_cons = _lambdas(binders, inner) if is_list else SLam(node.head, inner, nonlinear=True)
        logger.debug("Desugared %s carrying %s", node.form, carried or "nothing")
        return _apply(scrutinee, SBang(on_nil), SBang(on_cons), *(SVar(name) for name in carried))
