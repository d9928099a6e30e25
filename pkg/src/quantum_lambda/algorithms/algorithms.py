"""Quantum programs from the prelude: Deutsch, EPR, teleportation and the Fourier transform."""

from __future__ import annotations
import logging
from collections.abc import Sequence

import numpy as np

from quantum_lambda.prelude import list_ops, parse_program, prelude_term
from quantum_lambda.reducer import ReductionStatus, reduce_to_normal
from quantum_lambda.syntax.shapes import list_items
from quantum_lambda.syntax.terms import App, Calculus, Const, ConstantId, Term, bit_const

logger = logging.getLogger(__name__)

# Deutsch oracle definitions with the values (f(0), f(1)) of the function they encode.
DEUTSCH_ORACLES: dict[str, tuple[int, int]] = {
    "uf_zero": (0, 0),
    "uf_one": (1, 1),
    "uf_identity": (0, 1),
    "uf_not": (1, 0),
}


def deutsch_oracle(name: str) -> Term:
    """One of the four oracles `[x, y] -> [x, y xor f(x)]`.

    Raises:
        ValueError: If `name` is not a key of DEUTSCH_ORACLES.
    """
    if name not in DEUTSCH_ORACLES:
        available = ", ".join(DEUTSCH_ORACLES)
        raise ValueError(f"Unknown oracle {name!r}. Available oracles: {available}")
    return prelude_term(name)


def deutsch(uf: Term) -> Term:
    return App(prelude_term("deutsch"), uf)


def epr() -> Term:
    return prelude_term("epr")


def alice() -> Term:
    return prelude_term("alice")


def bob() -> Term:
    return prelude_term("bob")


def teleport(xprep: Term) -> Term:
    """Teleport the qubit `xprep` evaluates to; the result is the list [x'', y'', e2'']."""
    return App(prelude_term("teleport"), xprep)


def prepare(gates: Sequence[ConstantId | str], bit: int = 0) -> Term:
    """Single-qubit preparation applying `gates` in order, so prepare("HR") is `R (H 0)`."""
    term: Term = bit_const(bit)
    for gate in gates:
        term = App(Const(ConstantId(gate)), term)
    return term


def fourier(n: int) -> Term:
    """The Fourier transform on lists of exactly n qubits.

    For n >= 2 the input is matched against an n-tuple first; lists of another length skip
    the transform.

    Raises:
        ValueError: If n < 1.
    """
    if n < 1:
        raise ValueError(f"fourier needs at least one qubit, got {n}")
    if n == 1:
        return prelude_term("fourier")
    names = ", ".join(f"q{position}" for position in range(n))
    return parse_program(f"\\l. let ({names}) = l in fourier [{names}]")


def bits_tuple(bits: Sequence[int], calculus: Calculus = Calculus.Q) -> Term:
    return list_ops(calculus).tuple([bit_const(b) for b in bits])


def basis_bits(index: int, width: int) -> list[int]:
    """Bits of `index`, most significant first."""
    return [(index >> (width - 1 - position)) & 1 for position in range(width)]


def output_amplitudes(term: Term, max_steps: int | None = None) -> dict[tuple[int, ...], complex]:
    """Reduce a λ_q program whose result is a list of bits and read off each basis amplitude.

    Raises:
        ValueError: If the program does not reduce to a superposition of bit lists.
    """
    result = reduce_to_normal(term, Calculus.Q, max_steps)
    if result.status is not ReductionStatus.NORMAL:
        raise ValueError(f"Program ended {result.status} after {result.steps} steps")
    amplitudes: dict[tuple[int, ...], complex] = {}
    for register, amplitude in result.state.items():
        items = list_items(register)
        if items is None or not all(isinstance(i, Const) and i.constant.is_bit for _, i in items):
            raise ValueError("Program result is not a list of bits")
        key = tuple(item.constant.bit for _, item in items if isinstance(item, Const))
        amplitudes[key] = amplitudes.get(key, 0j) + amplitude
    return amplitudes


def circuit_matrix(circuit: Term, width: int, max_steps: int | None = None) -> np.ndarray:
    """The linear map a list-to-list program applies to `width` qubits.

    Column j holds the output amplitudes for the basis input j, indices most significant first.
    """
    dimension = 2**width
    matrix = np.zeros((dimension, dimension), dtype=complex)
    for column in range(dimension):
        program = App(circuit, bits_tuple(basis_bits(column, width)))
        for bits, amplitude in output_amplitudes(program, max_steps).items():
            row = int("".join(str(b) for b in bits), 2) if bits else 0
            matrix[row, column] += amplitude
    logger.debug("Built the %dx%d matrix of a circuit", dimension, dimension)
    return matrix


def dft_matrix(dimension: int) -> np.ndarray:
    """F[j, k] = e^{2πijk/N} / √N."""
    indices = np.arange(dimension)
    return np.exp(2j * np.pi * np.outer(indices, indices) / dimension) / np.sqrt(dimension)
