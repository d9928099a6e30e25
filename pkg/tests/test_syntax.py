from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_lambda.syntax import (
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
    Term,
    TermSyntaxError,
    UnknownConstantError,
    Var,
    bit_const,
    bit_slots,
    congruent,
    erase_keep,
    is_value,
    parse,
    pretty,
    substitute,
)

H0 = App(Const(ConstantId.H), Const(ConstantId.BIT0))


def terms(max_leaves: int = 12) -> st.SearchStrategy:
    """Closed terms over constants, free atoms and both binder kinds."""

    def extend(children: st.SearchStrategy) -> st.SearchStrategy:
        return st.one_of(
            st.builds(App, children, children),
            st.builds(Lam, children),
            st.builds(BangLam, children),
            st.builds(Bang, children),
        )

    leaves = st.one_of(
        st.sampled_from([Const(c) for c in ConstantId]),
        st.sampled_from([Free("apple"), Free("banana")]),
        st.integers(min_value=0, max_value=3).map(Var),
    )
    return st.recursive(leaves, extend, max_leaves=max_leaves)


def test_parse_identity():
    assert parse(r"\x.x") == Lam(Var(0))


def test_parse_nonlinear_abstraction():
    assert parse(r"(\!x.0)") == BangLam(Const(ConstantId.BIT0))


def test_parse_gate_application():
    assert parse("H 0") == H0


def test_parse_is_alpha_canonical():
    assert parse(r"\x.\y. x y") == parse(r"\a.\b. a b")


def test_parse_applications_associate_left():
    assert parse("f g h") == App(App(Free("f"), Free("g")), Free("h"))


def test_parse_ignores_comments():
    assert parse("-- a comment\nH 0 -- trailing") == H0


def test_parse_reports_position():
    with pytest.raises(TermSyntaxError) as excinfo:
        parse("\\x. (x")
    assert excinfo.value.line == 1


def test_parse_rejects_unknown_constant():
    with pytest.raises(UnknownConstantError):
        parse("Q 0")


def test_parse_rejects_sugar_without_prelude():
    with pytest.raises(TermSyntaxError):
        parse("[0, 1]")


def test_pretty_identity():
    assert pretty(Lam(Var(0))) == r"\x.x"


def test_pretty_left_association():
    assert pretty(App(App(Free("f"), Free("g")), Free("h"))) == "f g h"


def test_pretty_parenthesizes_banged_abstraction():
    assert pretty(Bang(Lam(Var(0)))) == r"!(\x.x)"


def test_pretty_prints_placeholders():
    assert pretty(App(PLACEHOLDER, App(Const(ConstantId.H), PLACEHOLDER))) == "φ (H φ)"
    assert pretty(ErasedLam(App(PLACEHOLDER, Var(1)))).startswith("φ.")


def test_pretty_freshens_capturing_hints():
    term = Lam(Lam(App(Var(1), Var(0)), "x"), "x")
    assert parse(pretty(term)) == term


@given(terms())
@settings(max_examples=200)
def test_pretty_round_trips(term):
    if term.free_limit:
        term = Lam(Lam(Lam(Lam(term))))
    assert parse(pretty(term)) == term


def test_substitute_variable():
    assert substitute(Var(0), Const(ConstantId.BIT1)) == Const(ConstantId.BIT1)


def test_substitute_shifts_under_binders():
    # (\x.\y.x) applied to a free-variable value keeps it free under the inner binder
    body = Lam(Var(1))
    assert substitute(body, Var(5)) == Lam(Var(6))


def test_k_combinator_by_two_substitutions():
    k = parse(r"\x.\y.x")
    assert isinstance(k, Lam)
    once = substitute(k.body, Free("a"))
    assert isinstance(once, Lam)
    assert substitute(once.body, Free("b")) == Free("a")


def test_erase_keep_variable():
    assert erase_keep(Var(0)) == Var(0)


def test_erase_keep_application():
    assert erase_keep(App(Free("f"), Var(0))) == App(PLACEHOLDER, Var(0))


def test_erase_keep_abstraction():
    body = Lam(App(Var(0), Var(1)))
    assert erase_keep(body) == ErasedLam(App(PLACEHOLDER, Var(1)))


def test_erase_keep_without_binder_is_placeholder():
    assert erase_keep(H0) == PLACEHOLDER


@given(terms())
@settings(max_examples=200)
def test_erase_keep_is_idempotent(term):
    once = erase_keep(term)
    assert erase_keep(once) == once


def test_congruent_bits():
    assert congruent(H0, App(Const(ConstantId.H), Const(ConstantId.BIT1)))
    assert not congruent(H0, App(Const(ConstantId.S), Const(ConstantId.BIT0)))


@given(terms(), terms())
@settings(max_examples=100)
def test_congruent_is_symmetric(first, second):
    assert congruent(first, second) == congruent(second, first)


@given(terms())
@settings(max_examples=100)
def test_congruent_is_reflexive(term):
    assert congruent(term, term)


@st.composite
def congruent_pairs(draw) -> tuple[Term, Term]:
    """A term and a copy with some of its bit leaves flipped."""
    term = draw(terms())

    def vary(current: Term) -> Term:
        match current:
            case Const(constant) if constant.is_bit:
                return bit_const(1 - constant.bit) if draw(st.booleans()) else current
            case App(fun, arg):
                return replace(current, fun=vary(fun), arg=vary(arg))
            case Lam(body) | BangLam(body) | Bang(body):
                return replace(current, body=vary(body))
        return current

    return term, vary(term)


@given(congruent_pairs())
@settings(max_examples=100)
def test_congruent_terms_erase_alike(pair):
    first, second = pair
    assert congruent(first, second)
    assert erase_keep(first) == erase_keep(second)


def test_is_value():
    assert is_value(Bang(H0), Calculus.Q)
    assert not is_value(H0, Calculus.Q)
    assert is_value(BangLam(Const(ConstantId.BIT0)), Calculus.Q)
    assert not is_value(Bang(H0), Calculus.I)


def test_bit_slots_in_preorder():
    term = App(Const(ConstantId.CNOT), App(Const(ConstantId.BIT1), Const(ConstantId.BIT0)))
    assert bit_slots(term) == [(1, 0), (1, 1)]
