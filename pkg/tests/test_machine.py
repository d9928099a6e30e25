import pytest

from quantum_lambda.algorithms import PROGRAM_REGISTRY
from quantum_lambda.linearity import check_well_formed
from quantum_lambda.machine import (
    CalculusError,
    IllFormedRegisterError,
    MalformedHistoryError,
    RuleTag,
    RunStatus,
    Transition,
    WellFormednessError,
    run,
    select_redex,
    step_backward,
    transition,
)
from quantum_lambda.prelude import decode_bits, decode_nat, parse_program
from quantum_lambda.quantum_state import (
    FactoredState,
    Superposition,
    check_congruence,
    factor_history,
    norm,
)
from quantum_lambda.syntax import (
    Bang,
    Calculus,
    Placeholder,
    bit_const,
    iter_subterms,
    parse,
    pretty,
    subterm_at,
)

SLOW_PROGRAMS = {"qft3", "adder", "teleport", "double_map"}


def corpus_params():
    return [
        pytest.param(pid, marks=pytest.mark.slow) if pid in SLOW_PROGRAMS else pid
        for pid in PROGRAM_REGISTRY
    ]


def same_state(first: Superposition, second: Superposition) -> bool:
    if set(first) != set(second):
        return False
    return all(abs(first.amplitude(c) - second.amplitude(c)) < 1e-9 for c in first)


def history_lines(state: Superposition) -> list[str]:
    return [pretty(frame) for frame in state.shape.history.frames()]


def test_hadamard_pair_halts_on_zero():
    result = run(parse("H (H 0)"), Calculus.Q)
    assert result.status is RunStatus.HALTED
    assert result.steps == 3
    ((config, amplitude),) = result.state.items()
    assert config.register == bit_const(0)
    assert abs(amplitude - 1) < 1e-9
    assert history_lines(result.state) == ["φ (H φ)", "H φ", "φ"]


def test_erased_argument_stays_in_history():
    result = run(parse(r"(\x. apple) banana"), Calculus.I)
    assert result.status is RunStatus.HALTED
    ((config, _),) = result.state.items()
    assert pretty(config.register) == "apple"
    assert "banana" in history_lines(result.state)[0]


def test_discarding_a_suspension():
    result = run(parse(r"(\!x.0) !(H 0)"), Calculus.Q)
    assert result.status is RunStatus.HALTED
    assert result.state.shape.register == bit_const(0)
    assert len(result.state) == 1


def test_discard_fires_bang_beta2():
    moved = transition(Superposition.single(parse(r"(\!x.0) !(H 0)")), Calculus.Q)
    assert moved.rule.tag is RuleTag.BANG_BETA2


def test_well_formed_program_can_get_stuck():
    result = run(parse(r"(\y. (\!z. 0) y) (H 0)"), Calculus.Q)
    assert result.status is RunStatus.STUCK
    assert result.terminated_by_history()


def test_gate_on_non_bit_is_stuck():
    assert run(parse(r"H (\x.x)"), Calculus.Q).status is RunStatus.STUCK


def test_adding_church_numerals():
    result = run(parse_program("add !2n !2n"), Calculus.Q)
    assert result.status is RunStatus.HALTED
    assert decode_nat(result.state.shape.register) == 4


def test_conditional_phase_decodes_its_numeral():
    result = run(parse_program("cphase !1n [1, 1]"), Calculus.Q)
    factored = factor_history(result.state)
    assert isinstance(factored, FactoredState)
    ((register, amplitude),) = factored.register.items()
    assert decode_bits(register) == [1, 1]
    assert abs(amplitude + 1) < 1e-9


def test_ill_formed_program_is_rejected():
    with pytest.raises(WellFormednessError) as excinfo:
        run(parse(r"\x. 0"), Calculus.Q)
    assert excinfo.value.violations


def test_bang_is_rejected_in_untyped_calculus():
    with pytest.raises(CalculusError):
        run(parse("!0"), Calculus.I)


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        run(parse("H 0"), Calculus.Q, max_steps=0)


def test_budget_exceeded():
    result = run(parse("H (H 0)"), Calculus.Q, max_steps=1)
    assert result.status is RunStatus.BUDGET_EXCEEDED
    assert result.steps == 1
    assert not result.terminated_by_history()


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("QLAM_MAX_STEPS", "1")
    assert run(parse("H (H 0)"), Calculus.Q).status is RunStatus.BUDGET_EXCEEDED


def test_select_redex_rejects_linear_misuse():
    with pytest.raises(IllFormedRegisterError):
        select_redex(parse(r"(\x. 0) 1"), Calculus.Q)


def test_trace_records_every_rule():
    result = run(parse("H (H 0)"), Calculus.Q, trace=True)
    assert [rule.tag for rule in result.trace] == [RuleTag.GATE, RuleTag.GATE, RuleTag.ID]


def test_backward_step_checks_the_frame():
    start = Superposition.single(parse("H (H 0)"))
    moved = transition(start, Calculus.Q)
    with pytest.raises(MalformedHistoryError):
        step_backward(start, moved.rule, Calculus.Q)


def test_untyped_steps_are_reversible():
    state = Superposition.single(parse_program("apply id banana", Calculus.I))
    for _ in range(4):
        moved = transition(state, Calculus.I)
        assert same_state(step_backward(moved.state, moved.rule, Calculus.I), state)
        state = moved.state


def test_gate_step_replaces_application_by_operand():
    moved = transition(Superposition.single(parse("H 0")), Calculus.Q)
    assert moved.rule.tag is RuleTag.GATE
    assert {config.register for config in moved.state} == {bit_const(0), bit_const(1)}
    assert history_lines(moved.state) == ["H φ"]
    assert select_redex(moved.state.shape.register, Calculus.Q).tag is RuleTag.ID


def test_two_qubit_gate_leaves_the_list():
    result = run(parse_program("cnot [1, 0]"), Calculus.Q, trace=True)
    assert result.status is RunStatus.HALTED
    assert [rule.tag for rule in result.trace].count(RuleTag.GATE) == 1
    assert decode_bits(result.state.shape.register) == [1, 1]


def test_gate_step_is_undone_from_the_history():
    state = Superposition.single(parse_program("cnot [H 0, 0]"))
    for _ in range(3):
        moved = transition(state, Calculus.Q)
        assert same_state(step_backward(moved.state, moved.rule, Calculus.Q), state)
        state = moved.state


def suspension_definite(state: Superposition) -> bool:
    shape = state.shape.register
    for path, subterm in iter_subterms(shape):
        if isinstance(subterm, Bang):
            if any(subterm_at(config.register, path) != subterm for config in state):
                return False
    return True


@pytest.mark.parametrize("program_id", corpus_params())
def test_corpus_invariants_hold_at_every_step(program_id):
    term, calculus = PROGRAM_REGISTRY[program_id]["builder"]()
    previous = [Superposition.single(term)]

    def observe(count: int, moved: Transition) -> None:
        assert norm(moved.state) == pytest.approx(1.0, abs=1e-12)
        assert check_congruence(moved.state) is None
        assert same_state(step_backward(moved.state, moved.rule, calculus), previous[0])
        if calculus is Calculus.Q:
            assert isinstance(factor_history(moved.state), FactoredState)
            assert suspension_definite(moved.state)
            for config in moved.state:
                assert check_well_formed(config.register) == []
        if moved.rule.tag is not RuleTag.ID:
            assert not isinstance(moved.state.shape.history.last, Placeholder)
        previous[0] = moved.state

    result = run(term, calculus, hooks=[observe])
    assert result.status is RunStatus.HALTED
    assert result.terminated_by_history()
