import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_lambda.algorithms import PROGRAM_REGISTRY
from quantum_lambda.machine import run
from quantum_lambda.prelude import decode_bits, fix, is_fix_unfolding, parse_program
from quantum_lambda.quantum_state import Superposition
from quantum_lambda.reducer import (
    ReductionStatus,
    RegisterState,
    TermContext,
    agrees_with_machine,
    compare_with_machine,
    joinable,
    reduce_step,
    reduce_to_normal,
)
from quantum_lambda.syntax import App, Bang, Calculus, Free, bit_const, parse

SQRT_HALF = 1 / np.sqrt(2)


def test_nonlinear_argument_is_copied():
    state = RegisterState.single(parse(r"(\!x. x x) !(\y.y)"))
    reduced = reduce_step(state)
    assert reduced == RegisterState.single(parse(r"(\y.y) (\y.y)"))


def test_hadamard_on_zero():
    result = reduce_to_normal(parse("H 0"))
    assert result.status is ReductionStatus.NORMAL
    assert result.steps == 1
    amplitudes = result.state.amplitudes
    assert amplitudes[bit_const(0)] == pytest.approx(SQRT_HALF)
    assert amplitudes[bit_const(1)] == pytest.approx(SQRT_HALF)


def test_fix_unfolds_in_two_steps():
    body = parse(r"\!f. \x. x")
    state = RegisterState.single(App(fix(Calculus.Q), Bang(body)))
    for _ in range(2):
        state = reduce_step(state)
        assert isinstance(state, RegisterState)
    assert is_fix_unfolding(state.shape, body)


def test_hadamard_map_is_uniform():
    result = reduce_to_normal(parse_program("map !H [0, 0, 0]"))
    assert result.status is ReductionStatus.NORMAL
    assert len(result.state) == 8
    kets = {tuple(decode_bits(term) or ()) for term in result.state}
    assert len(kets) == 8
    for _, amplitude in result.state.items():
        assert amplitude == pytest.approx(1 / np.sqrt(8))


def test_untyped_identity():
    result = reduce_to_normal(parse(r"(\x.x) banana"), Calculus.I)
    assert result.status is ReductionStatus.NORMAL
    assert result.state.shape == Free("banana")


def test_no_reduction_under_suspension():
    result = reduce_to_normal(parse("!(H 0)"))
    assert result.status is ReductionStatus.NORMAL
    assert result.steps == 0


def test_stuck_reduction():
    result = reduce_to_normal(parse(r"(\y. (\!z. 0) y) (H 0)"))
    assert result.status is ReductionStatus.STUCK


def test_budget_exceeded():
    result = reduce_to_normal(parse("H (H 0)"), max_steps=1)
    assert result.status is ReductionStatus.BUDGET_EXCEEDED


def test_context_rejects_hole_under_suspension():
    with pytest.raises(ValueError):
        TermContext(parse("!(H 0)"), (0,))


def test_decompose_and_plug():
    term = parse("H (H 0)")
    split = TermContext.decompose(term, Calculus.Q)
    assert split is not None
    context, redex = split
    assert context.hole == (1,)
    assert redex == parse("H 0")
    assert context.is_evaluation_context
    assert context.plug(redex) == term


REDEXES = [
    parse("H 0"),
    parse("S 1"),
    parse(r"(\x. x) 0"),
    parse(r"(\!x. 0) !1"),
    parse(r"(\!x. x) !(\y. y)"),
]
SURROUNDING_VALUES = [parse(r"\x. x"), parse("1"), parse("!0")]


@given(
    redex=st.sampled_from(REDEXES),
    layers=st.lists(
        st.tuples(st.sampled_from([0, 1]), st.sampled_from(SURROUNDING_VALUES)), max_size=4
    ),
)
@settings(max_examples=50, deadline=None)
def test_reduction_commutes_with_plugging(redex, layers):
    term = redex
    for position, value in layers:
        term = App(term, value) if position == 0 else App(value, term)
    split = TermContext.decompose(term, Calculus.Q)
    assert split is not None
    context, found = split
    assert found == redex
    assert context.hole == tuple(position for position, _ in reversed(layers))

    inner = reduce_step(RegisterState.single(redex))
    outer = reduce_step(RegisterState.single(term))
    assert isinstance(inner, RegisterState)
    assert isinstance(outer, RegisterState)
    expected = {context.plug(reduced): amplitude for reduced, amplitude in inner.items()}
    assert set(outer) == set(expected)
    for reduced, amplitude in outer.items():
        assert amplitude == pytest.approx(expected[reduced])


def test_decompose_value():
    assert TermContext.decompose(parse(r"\x.x"), Calculus.Q) is None


def test_register_state_refuses_history():
    state = run(parse("H 0"), Calculus.Q).state
    with pytest.raises(ValueError):
        RegisterState.from_superposition(state)


def test_register_state_round_trip():
    state = Superposition.single(parse("H 0"))
    assert RegisterState.from_superposition(state).to_superposition().shape == state.shape


def test_joinable():
    assert joinable(parse("H (H 0)"), parse("0"))
    assert not joinable(parse("H 0"), parse("H 1"))
    assert joinable(parse_program("add !1n !1n"), parse_program("suc !1n"))


@pytest.mark.parametrize("source", ["H (H 0)", "deutsch cnot", "cnot [H 0, 0]"])
def test_machine_and_reducer_agree(source):
    assert agrees_with_machine(parse_program(source))


def test_agreement_report():
    report = compare_with_machine(parse("H (H 0)"))
    assert report.agrees
    assert report.steps == 3
    assert report.status == "normal"
    assert report.first_divergence is None


@pytest.mark.slow
@pytest.mark.parametrize(
    "program_id", [pid for pid in PROGRAM_REGISTRY if pid != "mixed_state"]
)
def test_corpus_agrees_with_reducer(program_id):
    term, _ = PROGRAM_REGISTRY[program_id]["builder"]()
    assert agrees_with_machine(term)
