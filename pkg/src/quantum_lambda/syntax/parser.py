"""Concrete syntax: a lark LALR grammar, the surface transformer and index resolution."""

from __future__ import annotations
import logging
from collections.abc import Callable

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.syntax.surface import (
    SUGAR_NODES,
    SApp,
    SBang,
    SCase,
    SCons,
    SConst,
    SGlobal,
    SLam,
    SLet,
    SList,
    SNat,
    SRec,
    SugarForm,
    Surface,
    SVar,
)
from quantum_lambda.syntax.terms import App, Bang, BangLam, Const, ConstantId, Free, Lam, Term, Var

logger = logging.getLogger(__name__)

GRAMMAR = r"""
?start: term

?term: lam
     | let_expr
     | case_expr
     | rec_expr
     | cons_expr

lam: LAMBDA IDENT "." term
rec_expr: "rec" IDENT "." term
let_expr: "let" pattern "=" term "in" term
case_expr: "case" term "of" "(" branch "," branch ")"

pattern: IDENT                          -> pat_var
       | "!" IDENT                      -> pat_bang
       | "(" IDENT ("," IDENT)+ ")"     -> pat_tuple
       | IDENT ":" IDENT                -> pat_cons

branch: IDENT "->" term                 -> branch_name
      | NAT "->" term                   -> branch_nat
      | IDENT ":" IDENT "->" term       -> branch_cons
      | IDENT IDENT "->" term           -> branch_suc

?cons_expr: app
          | app ":" cons_expr           -> cons

?app: atom
    | app atom                          -> app

?atom: IDENT                            -> ident
     | UIDENT                           -> uident
     | BIT                              -> bit
     | NAT                              -> nat
     | "!" atom                         -> bang
     | "(" term ")"
     | "[" [term ("," term)*] "]"       -> tuple

LAMBDA: /\\!?/
IDENT: /[a-z_][A-Za-z0-9_']*/
UIDENT: /[A-Z][A-Za-z0-9_']*/
NAT: /[0-9]+n/
BIT: /[01]/
COMMENT: /--[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""

LOWERCASE_CONSTANTS = {ConstantId.CNOT.value, ConstantId.CPHASE.value}
UPPERCASE_CONSTANTS = {
    c.value for c in ConstantId if c.value.isupper() and c.value not in LOWERCASE_CONSTANTS
}
KEYWORDS = {"let", "in", "case", "of", "rec"}

_parser = Lark(GRAMMAR, parser="lalr", lexer="contextual", propagate_positions=True)

Desugarer = Callable[[Surface], Surface]


class TermSyntaxError(QuantumLambdaError):
    """Malformed concrete syntax, located by line and column (1-based, 0 when unknown)."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownConstantError(TermSyntaxError):
    """An uppercase identifier that names no constant."""


@v_args(inline=True)
class SurfaceBuilder(Transformer):
    """Turns the lark parse tree into named surface nodes."""

    def lam(self, marker: Token, name: Token, body: Surface) -> Surface:
        return SLam(str(name), body, nonlinear=str(marker) == "\\!")

    def rec_expr(self, name: Token, body: Surface) -> Surface:
        return SRec(str(name), body)

    def let_expr(self, pattern: tuple[SugarForm, tuple[str, ...], bool], bound, body) -> Surface:
        form, names, nonlinear = pattern
        return SLet(form, names, bound, body, nonlinear)

    def pat_var(self, name: Token):
        return SugarForm.LET_VAR, (str(name),), False

    def pat_bang(self, name: Token):
        return SugarForm.LET_VAR, (str(name),), True

    def pat_tuple(self, *names: Token):
        return SugarForm.LET_TUPLE, tuple(str(n) for n in names), False

    def pat_cons(self, head: Token, tail: Token):
        return SugarForm.LET_CONS, (str(head), str(tail)), False

    def branch_name(self, name: Token, body: Surface):
        if str(name) != "empty":
            raise TermSyntaxError(
                f"Expected 'empty' or '0n' pattern, found {name}", name.line, name.column
            )
        return "nil", SugarForm.CASE_LIST, body

    def branch_nat(self, numeral: Token, body: Surface):
        if int(str(numeral)[:-1]) != 0:
            raise TermSyntaxError(
                f"Only '0n' may head a numeral case, found {numeral}", numeral.line, numeral.column
            )
        return "nil", SugarForm.CASE_NAT, body

    def branch_cons(self, head: Token, tail: Token, body: Surface):
        return "cons", SugarForm.CASE_LIST, (str(head), str(tail), body)

    def branch_suc(self, keyword: Token, name: Token, body: Surface):
        if str(keyword) != "suc":
            raise TermSyntaxError(
                f"Expected 'suc m' or 'h:t' pattern, found {keyword}", keyword.line, keyword.column
            )
        return "cons", SugarForm.CASE_NAT, (str(name), "", body)

    def case_expr(self, scrutinee: Surface, first, second) -> Surface:
        kind_nil, form_nil, on_nil = first
        kind_cons, form_cons, payload = second
        if kind_nil != "nil" or kind_cons != "cons" or form_nil is not form_cons:
            raise TermSyntaxError(
                "case branches must read (empty -> a, h:t -> b) or (0n -> a, suc m -> b)"
            )
        head, tail, on_cons = payload
        return SCase(form_nil, scrutinee, on_nil, head, tail, on_cons)

    def cons(self, head: Surface, tail: Surface) -> Surface:
        return SCons(head, tail)

    def app(self, fun: Surface, arg: Surface) -> Surface:
        return SApp(fun, arg)

    def ident(self, name: Token) -> Surface:
        if str(name) in LOWERCASE_CONSTANTS:
            return SConst(ConstantId(str(name)))
        return SVar(str(name))

    def uident(self, name: Token) -> Surface:
        if str(name) not in UPPERCASE_CONSTANTS:
            raise UnknownConstantError(f"Unknown constant {name}", name.line, name.column)
        return SConst(ConstantId(str(name)))

    def bit(self, token: Token) -> Surface:
        return SConst(ConstantId(str(token)))

    def nat(self, token: Token) -> Surface:
        return SNat(int(str(token)[:-1]))

    def bang(self, body: Surface) -> Surface:
        return SBang(body)

    def tuple(self, *items: Surface | None) -> Surface:
        return SList(tuple(item for item in items if item is not None))


_builder = SurfaceBuilder()


def parse_surface(source: str) -> Surface:
    """Parse concrete syntax into named surface nodes, sugar included.

    Raises:
        TermSyntaxError: On malformed input.
        UnknownConstantError: On an uppercase identifier that is not a constant.
    """
    try:
        tree = _parser.parse(source)
    except UnexpectedEOF as exc:
        lines = source.splitlines() or [""]
        raise TermSyntaxError("Unexpected end of input", len(lines), len(lines[-1]) + 1) from exc
    except UnexpectedInput as exc:
        raise TermSyntaxError(_describe(exc), exc.line, exc.column) from exc
    try:
        return _builder.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, TermSyntaxError):
            raise exc.orig_exc from None
        raise


def _describe(exc: UnexpectedInput) -> str:
    token = getattr(exc, "token", None)
    if token is not None:
        return f"Unexpected token {str(token)!r}"
    char = getattr(exc, "char", None)
    return f"Unexpected character {char!r}" if char is not None else "Malformed input"


def has_sugar(node: Surface) -> bool:
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, SUGAR_NODES):
            return True
        match current:
            case SLam(_, body, _) | SBang(body):
                stack.append(body)
            case SApp(fun, arg):
                stack.extend((fun, arg))
    return False


def resolve(node: Surface) -> Term:
    """Convert core surface syntax to a nameless term; unbound names become `Free`."""
    return _resolve(node, [])


def _resolve(node: Surface, scope: list[str]) -> Term:
    match node:
        case SVar(name):
            for offset, bound in enumerate(reversed(scope)):
                if bound == name:
                    return Var(offset, name)
            return Free(name)
        case SConst(constant):
            return Const(constant)
        case SGlobal(name):
            return Free(name)
        case SLam(name, body, nonlinear):
            scope.append(name)
            try:
                inner = _resolve(body, scope)
            finally:
                scope.pop()
            return BangLam(inner, name) if nonlinear else Lam(inner, name)
        case SApp(fun, arg):
            return App(_resolve(fun, scope), _resolve(arg, scope))
        case SBang(body):
            return Bang(_resolve(body, scope))
    raise TermSyntaxError(f"{type(node).__name__} sugar needs the prelude desugarer")


def parse(source: str, desugar: Desugarer | None = None) -> Term:
    """Parse source text into a canonical nameless term.

    Args:
        source: Program text in the concrete grammar.
        desugar: Rewrites sugar (let, case, lists, numerals, rec) into core syntax. Without it
            sugar is rejected.

    Returns:
        The nameless term.

    Raises:
        TermSyntaxError: On malformed input or sugar without a desugarer.
    """
    surface = parse_surface(source)
    if has_sugar(surface):
        if desugar is None:
            raise TermSyntaxError("Sugar requires the prelude; use prelude.parse_program")
        surface = desugar(surface)
    term = resolve(surface)
    logger.debug("Parsed %d characters", len(source))
    return term
