"""The bundled program corpus and a runner that records each run as a CSV row."""

from __future__ import annotations
import csv
import json
import logging
import re
from pathlib import Path
from typing import Any, Protocol

from quantum_lambda.machine import run
from quantum_lambda.prelude import parse_program
from quantum_lambda.quantum_state import FactoredState, factor_history, norm
from quantum_lambda.reducer import compare_with_machine
from quantum_lambda.syntax.printer import pretty
from quantum_lambda.syntax.terms import Calculus, Term

logger = logging.getLogger(__name__)

_MODEL_HEADER = re.compile(r"^--\s*model:\s*([iq])\s*$", re.MULTILINE)


def get_programs_path() -> Path:
    """Get the standardized path to the bundled .lq programs.

    Returns:
        Path to the programs directory.
    """
    current_dir = Path(__file__).parent
    return current_dir / "programs"


def program_calculus(source: str, default: Calculus = Calculus.Q) -> Calculus:
    """The calculus named by a `-- model: i|q` header line, or `default`."""
    match = _MODEL_HEADER.search(source)
    return Calculus(match.group(1)) if match else default


def load_program(path: str | Path) -> tuple[Term, Calculus]:
    """Read, desugar and expand an .lq file in the calculus its header names."""
    source = Path(path).read_text(encoding="utf-8")
    calculus = program_calculus(source)
    return parse_program(source, calculus), calculus


# Protocol for program builders
# All builders take no arguments and return the program together with its calculus.
class ProgramBuilder(Protocol):
    """Protocol defining the standard signature for corpus program builders."""

    def __call__(self) -> tuple[Term, Calculus]:
        """Build the program."""
        ...


def _bundled(file_name: str) -> ProgramBuilder:
    def build() -> tuple[Term, Calculus]:
        return load_program(get_programs_path() / file_name)

    return build


PROGRAM_REGISTRY: dict[str, dict[str, Any]] = {
    "hadamard_pair": {"builder": _bundled("hadamard_pair.lq")},
    "epr": {"builder": _bundled("epr.lq")},
    "deutsch": {"builder": _bundled("deutsch.lq")},
    "teleport": {"builder": _bundled("teleport.lq")},
    "qft2": {"builder": _bundled("qft2.lq")},
    "qft3": {"builder": _bundled("qft3.lq")},
    "adder": {"builder": _bundled("adder.lq")},
    "hadamard_map": {"builder": _bundled("hadamard_map.lq")},
    "double_map": {"builder": _bundled("double_map.lq")},
    "mixed_state": {"builder": _bundled("mixed_state.lq")},
    # Add new programs here...
}


class CorpusRunner:
    """Runs registered programs on the machine and writes one result row per program."""

    def __init__(self, max_steps: int | None = None) -> None:
        self.max_steps = max_steps

    def _get_programs_to_run(
        self, program_ids: list[str] | None = None
    ) -> dict[str, dict[str, Any]]:
        """Get the programs to run, filtered by program_ids if provided.

        Raises:
            ValueError: If any program id is not found in PROGRAM_REGISTRY.
        """
        if program_ids is None:
            return PROGRAM_REGISTRY

        invalid = [pid for pid in program_ids if pid not in PROGRAM_REGISTRY]
        if invalid:
            available = ", ".join(PROGRAM_REGISTRY.keys())
            raise ValueError(
                f"Invalid program IDs: {', '.join(invalid)}. Available programs: {available}"
            )
        return {pid: PROGRAM_REGISTRY[pid] for pid in program_ids}

    def run_program(self, program_id: str, builder: ProgramBuilder) -> dict[str, Any]:
        """Run one program and, in λ_q, check it against the reducer.

        Returns:
            A row for the output CSV.
        """
        term, calculus = builder()
        result = run(term, calculus, self.max_steps)
        factored = factor_history(result.state)
        if isinstance(factored, FactoredState):
            final_state = {pretty(r): [a.real, a.imag] for r, a in factored.register.items()}
        else:
            final_state = {
                config.serialize(): [a.real, a.imag] for config, a in result.state.items()
            }
        agrees: bool | None = None
        if calculus is Calculus.Q:
            agrees = compare_with_machine(term, self.max_steps).agrees
        logger.info("Program %s: %s after %d steps", program_id, result.status, result.steps)
        return {
            "program_id": program_id,
            "calculus": calculus.value,
            "status": result.status.value,
            "steps": result.steps,
            "branches": len(result.state),
            "norm": f"{norm(result.state):.12f}",
            "history_factors": isinstance(factored, FactoredState),
            "agrees_with_reducer": "n/a" if agrees is None else agrees,
            "final_state": final_state,
        }

    def run_csv(
        self,
        output_csv_path: str | Path,
        program_ids: list[str] | None = None,
    ) -> list[dict[str, Any]]:
        """Run the selected programs and write one row each to an output CSV.

        Output CSV columns:
        - program_id
        - calculus (q or i)
        - status (halted, stuck or budget)
        - steps, branches, norm
        - history_factors (whether the final state factors as history times register)
        - agrees_with_reducer (true/false, or n/a in λ_i)
        - final_state (JSON object mapping register terms to [re, im],
          keyed by whole configurations when the history does not factor)
        """
        output_csv_path = Path(output_csv_path)
        output_csv_path.parent.mkdir(parents=True, exist_ok=True)

        rows = [
            self.run_program(program_id, config["builder"])
            for program_id, config in self._get_programs_to_run(program_ids).items()
        ]

        fieldnames = [
            "program_id",
            "calculus",
            "status",
            "steps",
            "branches",
            "norm",
            "history_factors",
            "agrees_with_reducer",
            "final_state",
        ]
        with output_csv_path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=fieldnames)
            writer.writeheader()
            for r in rows:
                writer.writerow(
                    {
                        **r,
                        "final_state": json.dumps(
                            r["final_state"], ensure_ascii=False, sort_keys=True
                        ),
                    }
                )
        return rows

