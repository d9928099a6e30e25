"""Term representation, concrete syntax and structural operations."""

from .operations import (
    bit_slots,
    congruent,
    contains_bang,
    erase_keep,
    free_names,
    is_value,
    iter_subterms,
    occurs,
    replace_at,
    replace_free,
    shift,
    substitute,
    subterm_at,
    unerase,
    UneraseMismatch,
)
from .parser import TermSyntaxError, UnknownConstantError, parse, parse_surface, resolve
from .printer import pretty
from .surface import SugarForm, Surface
from .terms import (
    BIT0,
    BIT1,
    PLACEHOLDER,
    App,
    Bang,
    BangLam,
    Calculus,
    Const,
    ConstantId,
    ErasedLam,
    Free,
    Lam,
    Path,
    Placeholder,
    Term,
    Var,
    apps,
    bit_const,
    is_bit,
)

__all__ = [
    "BIT0",
    "BIT1",
    "PLACEHOLDER",
    "App",
    "Bang",
    "BangLam",
    "Calculus",
    "Const",
    "ConstantId",
    "ErasedLam",
    "Free",
    "Lam",
    "Path",
    "Placeholder",
    "SugarForm",
    "Surface",
    "Term",
    "TermSyntaxError",
    "UneraseMismatch",
    "UnknownConstantError",
    "Var",
    "apps",
    "bit_const",
    "bit_slots",
    "congruent",
    "contains_bang",
    "erase_keep",
    "free_names",
    "is_bit",
    "is_value",
    "iter_subterms",
    "occurs",
    "parse",
    "parse_surface",
    "pretty",
    "replace_at",
    "replace_free",
    "resolve",
    "shift",
    "substitute",
    "subterm_at",
    "unerase",
]
