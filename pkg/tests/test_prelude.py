import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from quantum_lambda.linearity import check_well_formed
from quantum_lambda.machine import RunStatus, run
from quantum_lambda.prelude import (
    ClassicalStatus,
    DefinitionService,
    UnknownDefinitionError,
    church_nat,
    classical_evaluate,
    combinators,
    decode_bits,
    decode_list,
    decode_nat,
    definitions,
    embed_classical,
    fix,
    is_classical,
    list_ops,
    parse_program,
)
from quantum_lambda.reducer import ReductionStatus, reduce_to_normal
from quantum_lambda.syntax import (
    App,
    Bang,
    Calculus,
    Free,
    Lam,
    TermSyntaxError,
    Var,
    bit_const,
    parse,
)


def evaluate(source: str, calculus: Calculus = Calculus.Q):
    result = reduce_to_normal(parse_program(source, calculus), calculus)
    assert result.status is ReductionStatus.NORMAL
    return result.state.shape


def classical_terms(depth: int = 5, bound: int = 0) -> st.SearchStrategy:
    """Pure λ-terms with no free de Bruijn indices."""
    leaf = st.sampled_from([Free("apple"), *(Var(i) for i in range(bound))])
    if depth == 0:
        return leaf
    inner = classical_terms(depth - 1, bound)
    return st.one_of(
        leaf,
        st.builds(Lam, classical_terms(depth - 1, bound + 1)),
        st.builds(App, inner, inner),
    )


@pytest.mark.parametrize("calculus", [Calculus.Q, Calculus.I])
@given(n=st.integers(min_value=0, max_value=32))
@settings(max_examples=20, deadline=None)
def test_numerals_round_trip(calculus, n):
    assert decode_nat(church_nat(n, calculus), calculus) == n


def test_numerals_are_natural():
    with pytest.raises(ValueError):
        church_nat(-1)


def test_numeral_sugar_matches_builder():
    assert parse_program("3n") == church_nat(3)


def test_numerals_are_well_formed():
    assert check_well_formed(church_nat(4)) == []


@pytest.mark.parametrize(("n", "expected"), [(0, 0), (1, 0), (3, 2)])
def test_predecessor(n, expected):
    assert decode_nat(evaluate(f"pred !{n}n")) == expected


def test_case_on_numerals():
    assert evaluate(r"case 0n of (0n -> 1, suc m -> 0)", Calculus.I) == bit_const(1)
    assert evaluate(r"case 2n of (0n -> 1, suc m -> 0)", Calculus.I) == bit_const(0)


def test_case_on_empty_list():
    assert evaluate("case empty of (empty -> 1, h:t -> 0)", Calculus.I) == bit_const(1)


def test_tuple_pattern_in_untyped_calculus():
    shape = evaluate("let (x, y) = [2n, 3n] in add x y", Calculus.I)
    assert decode_nat(shape, Calculus.I) == 5


def test_tuple_builder_matches_sugar():
    assert list_ops().tuple([bit_const(0), bit_const(1)]) == parse_program("[0, 1]")


@pytest.mark.parametrize(
    ("bits", "expected"), [([0, 0], [0, 0]), ([0, 1], [0, 1]), ([1, 0], [1, 1]), ([1, 1], [1, 0])]
)
def test_cnot_truth_table(bits, expected):
    result = run(parse_program(f"cnot [{bits[0]}, {bits[1]}]"))
    assert result.status is RunStatus.HALTED
    assert len(result.state) == 1
    assert decode_bits(result.state.shape.register) == expected


def test_fix_is_well_formed():
    assert check_well_formed(fix(Calculus.Q)) == []


@pytest.mark.parametrize("n", [0, 3])
@pytest.mark.parametrize("m", range(6))
def test_fixpoint_addition_matches_self_application(m, n):
    expected = decode_nat(evaluate(f"add !{m}n !{n}n"))
    assert expected == m + n
    assert decode_nat(evaluate(f"fix_add !{m}n !{n}n")) == expected


def test_map_double():
    items = decode_list(evaluate("map !double [4n, 7n, 2n]"))
    assert items is not None
    assert [decode_nat(item) for item in items] == [8, 14, 4]


def test_untyped_map_double():
    items = decode_list(evaluate("map double [1n, 2n]", Calculus.I), Calculus.I)
    assert items is not None
    assert [decode_nat(item, Calculus.I) for item in items] == [2, 4]


def test_reverse_bits():
    assert decode_bits(evaluate("reverse [0, 1, 1]")) == [1, 1, 0]


def test_append_bits():
    assert decode_bits(evaluate("append [1] [0, 1]")) == [1, 0, 1]


def test_combinators_per_calculus():
    assert set(combinators(Calculus.Q)) == {"map", "append", "reverse"}
    assert set(combinators(Calculus.I)) == {"map"}


def test_every_linear_definition_is_well_formed():
    service = definitions()
    for definition in service.get_definitions(Calculus.Q):
        term = service.term(definition.name, Calculus.Q)
        assert check_well_formed(term) == [], definition.name


def test_unknown_definition():
    with pytest.raises(UnknownDefinitionError):
        DefinitionService().term("no_such_name", Calculus.Q)


def test_sugar_names_cannot_be_captured():
    result = run(parse_program(r"(\empty. [empty]) 0"))
    assert decode_bits(result.state.shape.register) == [0]


def test_linear_case_carries_free_variables():
    term = parse_program(r"\x. \l. case l of (empty -> x, h:t -> cons h (cons x t))")
    assert check_well_formed(term) == []


def test_case_binder_may_not_shadow_carried_variable():
    with pytest.raises(TermSyntaxError):
        parse_program(r"\h. \l. case l of (empty -> h, h:t -> t)")


def test_embedding_of_identity_application():
    term = parse(r"(\x.x) apple")
    result = run(embed_classical(term))
    assert result.status is RunStatus.HALTED
    assert result.state.shape.register == Bang(Free("apple"))


def test_embedding_discards_arguments():
    term = parse(r"(\x.\y.x) apple banana")
    assert run(embed_classical(term)).state.shape.register == Bang(Free("apple"))


def test_embedding_rejects_quantum_constants():
    with pytest.raises(ValueError):
        embed_classical(parse("H 0"))


def test_embedding_of_classical_addition():
    term = parse_program("add 2n 2n", Calculus.I)
    assert is_classical(term)
    classical = classical_evaluate(term)
    assert classical.status is ClassicalStatus.VALUE
    assert decode_nat(classical.term, Calculus.I) == 4
    embedded = run(embed_classical(term), Calculus.Q, max_steps=10_000)
    assert embedded.status is RunStatus.HALTED
    assert embedded.state.shape.register == embed_classical(classical.term)


def test_is_classical():
    assert is_classical(parse(r"\x. x apple"))
    assert not is_classical(parse(r"\x. H x"))


@given(classical_terms())
@settings(max_examples=20, deadline=None)
def test_embedding_simulates_classical_evaluation(term):
    classical = classical_evaluate(term, max_steps=50)
    assume(classical.status is not ClassicalStatus.BUDGET_EXCEEDED)
    embedded = run(embed_classical(term), Calculus.Q, max_steps=10_000)
    assume(embedded.status is not RunStatus.BUDGET_EXCEEDED)
    if classical.status is ClassicalStatus.VALUE:
        assert embedded.status is RunStatus.HALTED
        assert embedded.state.shape.register == embed_classical(classical.term)
    else:
        assert embedded.status is RunStatus.STUCK
