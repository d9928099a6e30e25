import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantum_lambda.gates import gate_spec
from quantum_lambda.machine import run
from quantum_lambda.prelude import parse_program
from quantum_lambda.quantum_state import (
    EMPTY_HISTORY,
    BitSlot,
    Configuration,
    FactoredState,
    History,
    NotProduct,
    SlotNotBitError,
    Superposition,
    apply_unitary,
    check_congruence,
    density_matrix,
    factor_history,
    format_state,
    norm,
    reduced_density,
)
from quantum_lambda.syntax import (
    App,
    Calculus,
    Const,
    ConstantId,
    Free,
    Term,
    bit_const,
    bit_slots,
    parse,
)

SQRT_HALF = 1 / np.sqrt(2)
ROOT = BitSlot(())


def basis(bits: int) -> Superposition:
    return Superposition.single(bit_const(bits))


def pair(first: int, second: int) -> Term:
    return parse_program(f"[{first}, {second}]")


def slots_of(register: Term) -> list[BitSlot]:
    return [BitSlot(path) for path in bit_slots(register)]


def test_norm_of_singleton():
    assert norm(basis(0)) == pytest.approx(1.0)


def test_norm_of_balanced_pair():
    state = apply_unitary(basis(0), [ROOT], gate_spec(ConstantId.H))
    assert len(state) == 2
    assert norm(state) == pytest.approx(1.0, abs=1e-12)


def test_hadamard_on_zero_and_one():
    plus = apply_unitary(basis(0), [ROOT], gate_spec(ConstantId.H))
    minus = apply_unitary(basis(1), [ROOT], gate_spec(ConstantId.H))
    zero, one = (Configuration(EMPTY_HISTORY, bit_const(b)) for b in (0, 1))
    assert plus.amplitude(zero) == pytest.approx(SQRT_HALF)
    assert plus.amplitude(one) == pytest.approx(SQRT_HALF)
    assert minus.amplitude(zero) == pytest.approx(SQRT_HALF)
    assert minus.amplitude(one) == pytest.approx(-SQRT_HALF)


def test_cnot_on_one_zero():
    register = pair(1, 0)
    state = apply_unitary(
        Superposition.single(register), slots_of(register), gate_spec(ConstantId.CNOT)
    )
    ((config, amplitude),) = state.items()
    assert config.register == pair(1, 1)
    assert amplitude == pytest.approx(1.0)


def test_slot_must_hold_a_bit():
    with pytest.raises(SlotNotBitError):
        apply_unitary(Superposition.single(Free("apple")), [ROOT], gate_spec(ConstantId.H))


def test_slot_count_must_match_arity():
    with pytest.raises(ValueError):
        apply_unitary(basis(0), [ROOT, ROOT], gate_spec(ConstantId.H))


SINGLE_QUBIT = [ConstantId.H, ConstantId.S, ConstantId.R, ConstantId.X]


@given(st.lists(st.sampled_from(SINGLE_QUBIT), max_size=8))
@settings(max_examples=50)
def test_unitaries_preserve_norm_and_invert(gates):
    state = basis(0)
    for gate in gates:
        state = apply_unitary(state, [ROOT], gate_spec(gate))
        assert norm(state) == pytest.approx(1.0, abs=1e-12)
    for gate in reversed(gates):
        state = apply_unitary(state, [ROOT], gate_spec(gate).adjoint())
    zero = Configuration(EMPTY_HISTORY, bit_const(0))
    assert abs(state.amplitude(zero) - 1) < 1e-9


def test_equal_configurations_merge_once():
    config = Configuration(EMPTY_HISTORY, bit_const(0))
    state = Superposition.from_pairs([(config, 0.5), (config, 0.5)])
    assert state.amplitude(config) == pytest.approx(1.0)


def test_negligible_amplitudes_are_pruned():
    config = Configuration(EMPTY_HISTORY, bit_const(0))
    assert len(Superposition({config: 1e-14})) == 0


def test_history_is_persistent():
    base = History.of([Free("a")])
    left, right = base.push(Free("b")), base.push(Free("c"))
    assert left.frames() == (Free("a"), Free("b"))
    assert right.frames() == (Free("a"), Free("c"))
    assert left != right
    assert History.of([Free("a"), Free("b")]) == left
    assert left.pop() == (base, Free("b"))


def test_factor_hadamard_pair():
    result = run(parse("H (H 0)"), Calculus.Q)
    factored = factor_history(result.state)
    assert isinstance(factored, FactoredState)
    assert list(factored.register) == [bit_const(0)]
    assert abs(factored.register[bit_const(0)] - 1) < 1e-9


def test_factor_singleton():
    assert isinstance(factor_history(basis(1)), FactoredState)


def test_mixed_state_in_the_untyped_calculus():
    result = run(parse(r"(\y. (\x. y) y) (H 0)"), Calculus.I)
    assert isinstance(factor_history(result.state), NotProduct)
    rho = density_matrix(result.state)
    assert rho.labels == ["0", "1"]
    assert np.allclose(rho.matrix, [[0.5, 0], [0, 0.5]], atol=1e-9)


def test_density_of_product_state_is_rank_one():
    result = run(parse_program("cnot [H 0, 0]"), Calculus.Q)
    rho = density_matrix(result.state)
    assert rho.rank() == 1
    assert rho.is_hermitian()
    assert rho.trace() == pytest.approx(1.0)


def test_density_of_singleton():
    assert np.allclose(density_matrix(basis(0)).matrix, [[1.0]])


def test_density_eigenvalues_are_probabilities():
    result = run(parse(r"(\y. (\x. y) y) (H 0)"), Calculus.I)
    eigenvalues = np.linalg.eigvalsh(density_matrix(result.state).matrix)
    assert np.all(eigenvalues > -1e-9)
    assert np.all(eigenvalues < 1 + 1e-9)
    assert eigenvalues.sum() == pytest.approx(1.0)


def test_reduced_density_of_epr_half():
    result = run(parse_program("cnot [H 0, 0]"), Calculus.Q)
    register = result.state.shape.register
    first = slots_of(register)[:1]
    assert np.allclose(reduced_density(result.state, first), np.eye(2) / 2, atol=1e-9)


def test_congruence():
    plus = apply_unitary(basis(0), [ROOT], gate_spec(ConstantId.H))
    assert check_congruence(plus) is None
    mixed = Superposition.from_pairs(
        [
            (Configuration(EMPTY_HISTORY, App(Const(ConstantId.H), bit_const(0))), SQRT_HALF),
            (Configuration(EMPTY_HISTORY, App(Const(ConstantId.S), bit_const(0))), SQRT_HALF),
        ]
    )
    violation = check_congruence(mixed)
    assert violation is not None
    assert violation.part == "register"


def test_state_lines_are_canonical():
    plus = apply_unitary(basis(0), [ROOT], gate_spec(ConstantId.H))
    assert format_state(plus) == ["(0.707107,0.000000)  0", "(0.707107,0.000000)  1"]
