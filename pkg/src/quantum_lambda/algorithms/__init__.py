"""Quantum algorithms written in λ_q and the bundled program corpus."""

from .algorithms import (
    DEUTSCH_ORACLES,
    alice,
    basis_bits,
    bits_tuple,
    bob,
    circuit_matrix,
    deutsch,
    deutsch_oracle,
    dft_matrix,
    epr,
    fourier,
    output_amplitudes,
    prepare,
    teleport,
)
from .corpus import (
    PROGRAM_REGISTRY,
    CorpusRunner,
    ProgramBuilder,
    get_programs_path,
    load_program,
    program_calculus,
)
from .derived_gates import DerivedGate, cphase, cx, cz, derived_gates

__all__ = [
    "DEUTSCH_ORACLES",
    "PROGRAM_REGISTRY",
    "CorpusRunner",
    "DerivedGate",
    "ProgramBuilder",
    "alice",
    "basis_bits",
    "bits_tuple",
    "bob",
    "circuit_matrix",
    "cphase",
    "cx",
    "cz",
    "derived_gates",
    "deutsch",
    "deutsch_oracle",
    "dft_matrix",
    "epr",
    "fourier",
    "get_programs_path",
    "load_program",
    "output_amplitudes",
    "prepare",
    "program_calculus",
    "teleport",
]
