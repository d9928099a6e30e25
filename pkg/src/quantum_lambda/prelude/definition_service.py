"""Centralized service for reading prelude definitions from YAML and expanding free names."""

import logging
from functools import cached_property
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.prelude.desugar import Desugarer
from quantum_lambda.syntax.operations import free_names, replace_free
from quantum_lambda.syntax.parser import parse
from quantum_lambda.syntax.terms import Calculus, Term

logger = logging.getLogger(__name__)


class DefinitionError(QuantumLambdaError):
    """A prelude definition cannot be built, for example because it refers to itself."""


class UnknownDefinitionError(DefinitionError):
    """No definition of that name exists for the requested calculus."""


def get_definitions_path() -> Path:
    """Get the standardized path to definitions.yaml.

    Returns:
        Path to the definitions.yaml file.
    """
    current_dir = Path(__file__).parent
    return current_dir / "definitions.yaml"


class Definition(BaseModel):
    """Pydantic model for one named prelude term."""

    name: str = Field(..., min_length=1)
    calculus: Calculus = Field(..., description="Calculus whose programs may use the name")
    category: str = Field(...)
    description: str = Field(..., min_length=1)
    source: str = Field(..., min_length=1, description="Surface syntax, sugar allowed")


class DefinitionService:
    """Centralized service for reading definitions and expanding them into programs."""

    def __init__(self, path: Path | None = None) -> None:
        self._path = path or get_definitions_path()
        self._expanded: dict[tuple[Calculus, str], Term] = {}

    def _load_yaml(self) -> dict[str, Any]:
        """Load YAML file.

        Returns:
            Dictionary containing the YAML data.
        """
        with open(self._path) as f:
            data = yaml.safe_load(f)
        logger.debug("Loaded prelude definitions from %s", self._path)
        return data

    def get_all_definitions(self) -> list[Definition]:
        """Get all definitions from the YAML file, validated as Definition objects.

        Raises:
            ValidationError: If any definition fails Pydantic validation.
        """
        data = self._load_yaml()
        return [Definition.model_validate(d) for d in data.get("definitions", [])]

    @cached_property
    def _by_key(self) -> dict[tuple[Calculus, str], Definition]:
        return {(d.calculus, d.name): d for d in self.get_all_definitions()}

    def get_definitions(self, calculus: Calculus) -> list[Definition]:
        return [d for (c, _), d in self._by_key.items() if c is calculus]

    def get_definition(self, name: str, calculus: Calculus) -> Definition:
        """Get one definition.

        Raises:
            UnknownDefinitionError: If `name` is not defined for `calculus`.
        """
        try:
            return self._by_key[(calculus, name)]
        except KeyError:
            raise UnknownDefinitionError(f"No {calculus} definition named {name!r}") from None

    def has_definition(self, name: str, calculus: Calculus) -> bool:
        return (calculus, name) in self._by_key

    def term(self, name: str, calculus: Calculus) -> Term:
        """The closed term of a definition, with every name it uses expanded."""
        return self._term(name, calculus, ())

    def _term(self, name: str, calculus: Calculus, pending: tuple[str, ...]) -> Term:
        cached = self._expanded.get((calculus, name))
        if cached is not None:
            return cached
        if name in pending:
            cycle = " -> ".join((*pending, name))
            raise DefinitionError(f"Definitions refer to themselves: {cycle}; use rec")
        definition = self.get_definition(name, calculus)
        parsed = parse(definition.source, Desugarer(calculus))
        term = self._expand(parsed, calculus, (*pending, name))
        self._expanded[(calculus, name)] = term
        return term

    def _expand(self, term: Term, calculus: Calculus, pending: tuple[str, ...]) -> Term:
        used = {n for n in free_names(term) if self.has_definition(n, calculus)}
        if not used:
            return term
        resolved = {n: self._term(n, calculus, pending) for n in used}
        return replace_free(term, resolved.get)

    def expand(self, term: Term, calculus: Calculus) -> Term:
        """Replace every free name that has a definition by its closed term.

        Names without a definition stay free; they behave as opaque constants.

        Raises:
            DefinitionError: If definitions refer to one another in a cycle.
        """
        return self._expand(term, calculus, ())
