"""Desugaring, Church encodings, named definitions and the classical embedding."""

from quantum_lambda.syntax.surface import SugarForm

from .church import (
    ListOps,
    NatOps,
    church_nat,
    combinators,
    decode_bits,
    decode_list,
    decode_nat,
    definitions,
    fix,
    is_fix_unfolding,
    list_ops,
    nat_ops,
    parse_program,
    prelude_term,
)
from .classical import (
    ClassicalResult,
    ClassicalStatus,
    classical_evaluate,
    embed_classical,
    is_classical,
)
from .definition_service import (
    Definition,
    DefinitionError,
    DefinitionService,
    UnknownDefinitionError,
    get_definitions_path,
)
from .desugar import Desugarer

__all__ = [
    "ClassicalResult",
    "ClassicalStatus",
    "Definition",
    "DefinitionError",
    "DefinitionService",
    "Desugarer",
    "ListOps",
    "NatOps",
    "SugarForm",
    "UnknownDefinitionError",
    "church_nat",
    "classical_evaluate",
    "combinators",
    "decode_bits",
    "decode_list",
    "decode_nat",
    "definitions",
    "embed_classical",
    "fix",
    "get_definitions_path",
    "is_classical",
    "is_fix_unfolding",
    "list_ops",
    "nat_ops",
    "parse_program",
    "prelude_term",
]
