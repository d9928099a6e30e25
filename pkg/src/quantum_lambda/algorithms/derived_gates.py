"""Two-qubit gates derived from the primitives: cX, cZ and the conditional phases."""

from __future__ import annotations
from dataclasses import dataclass

import numpy as np

from quantum_lambda.algorithms.algorithms import circuit_matrix
from quantum_lambda.gates import GateSpec, gate_spec, is_unitary
from quantum_lambda.prelude import church_nat, prelude_term
from quantum_lambda.syntax.terms import App, Bang, Const, ConstantId, Term


@dataclass(frozen=True)
class DerivedGate:
    """A gate realized by a primitive matrix, a term over the primitives, or both."""

    name: str
    term: Term
    spec: GateSpec | None = None
    arity: int = 2

    def matrix(self) -> np.ndarray:
        """The primitive matrix when there is one, otherwise the matrix the term computes."""
        if self.spec is not None:
            return self.spec.matrix
        return circuit_matrix(self.term, self.arity)

    def is_unitary(self) -> bool:
        return is_unitary(self.matrix())


def cx() -> DerivedGate:
    return DerivedGate("cX", prelude_term("cX"), gate_spec(ConstantId.CNOT))


def cz() -> DerivedGate:
    return DerivedGate("cZ", prelude_term("cZ"))


def cphase(n: int) -> DerivedGate:
    """The primitive `cphase !n̄`.

    Raises:
        GateError: If n < 1.
    """
    spec = gate_spec(ConstantId.CPHASE, n)
    return DerivedGate(f"cphase({n})", App(Const(ConstantId.CPHASE), Bang(church_nat(n))), spec)


def derived_gates(max_phase: int = 3) -> dict[str, DerivedGate]:
    gates = {gate.name: gate for gate in (cx(), cz())}
    gates.update({f"cphase({n})": cphase(n) for n in range(1, max_phase + 1)})
    return gates
