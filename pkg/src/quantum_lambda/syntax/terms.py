"""Nameless term representation shared by both calculi.

Bound variables are De Bruijn indices; the display name a user wrote is kept as a hint that
never takes part in equality, so alpha-equivalent terms compare (and hash) equal.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from quantum_lambda._compat import StrEnum

Path = tuple[int, ...]


class Calculus(StrEnum):
    """The two calculi the machine understands."""

    I = "i"  # noqa: E741
    Q = "q"


class ConstantId(StrEnum):
    BIT0 = "0"
    BIT1 = "1"
    H = "H"
    S = "S"
    R = "R"
    CNOT = "cnot"
    X = "X"
    Y = "Y"
    Z = "Z"
    CPHASE = "cphase"

    @property
    def is_bit(self) -> bool:
        return self in (ConstantId.BIT0, ConstantId.BIT1)

    @property
    def bit(self) -> int:
        if not self.is_bit:
            raise ValueError(f"Constant {self.value} is not a bit")
        return 0 if self is ConstantId.BIT0 else 1

    @classmethod
    def from_bit(cls, bit: int) -> ConstantId:
        return cls.BIT1 if bit else cls.BIT0


class Term:
    """Base class of all term nodes."""

    __slots__ = ()

    # one more than the largest free De Bruijn index, 0 when closed
    free_limit: int

    def children(self) -> tuple[Term, ...]:
        return ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int
    hint: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("var", self.index)))
        object.__setattr__(self, "free_limit", self.index + 1)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Free(Term):
    """An unbound name: a prelude reference or an opaque atom such as `apple`."""

    name: str
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("free", self.name)))
        object.__setattr__(self, "free_limit", 0)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Lam(Term):
    body: Term
    hint: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("lam", self.body)))
        object.__setattr__(self, "free_limit", max(self.body.free_limit - 1, 0))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Term, ...]:
        return (self.body,)


@dataclass(frozen=True, slots=True)
class BangLam(Term):
    body: Term
    hint: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("banglam", self.body)))
        object.__setattr__(self, "free_limit", max(self.body.free_limit - 1, 0))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Term, ...]:
        return (self.body,)


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("app", self.fun, self.arg)))
        object.__setattr__(self, "free_limit", max(self.fun.free_limit, self.arg.free_limit))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Term, ...]:
        return (self.fun, self.arg)


@dataclass(frozen=True, slots=True)
class Const(Term):
    constant: ConstantId
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("const", self.constant)))
        object.__setattr__(self, "free_limit", 0)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Bang(Term):
    """A `!`-suspension; never reduced underneath."""

    body: Term
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("bang", self.body)))
        object.__setattr__(self, "free_limit", self.body.free_limit)

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Term, ...]:
        return (self.body,)


@dataclass(frozen=True, slots=True)
class ErasedLam(Term):
    """The `φ.` binder slot left by erasure; binds like a lambda but carries no linearity."""

    body: Term
    _hash: int = field(init=False, repr=False, compare=False)
    free_limit: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("erased", self.body)))
        object.__setattr__(self, "free_limit", max(self.body.free_limit - 1, 0))

    def __hash__(self) -> int:
        return self._hash

    def children(self) -> tuple[Term, ...]:
        return (self.body,)


@dataclass(frozen=True, slots=True)
class Placeholder(Term):
    @property
    def free_limit(self) -> int:
        return 0

    def __hash__(self) -> int:
        return 0x9E3779B9


PLACEHOLDER = Placeholder()
BIT0 = Const(ConstantId.BIT0)
BIT1 = Const(ConstantId.BIT1)

BINDERS = (Lam, BangLam, ErasedLam)


def bit_const(bit: int) -> Const:
    return BIT1 if bit else BIT0


def is_bit(term: Term) -> bool:
    return isinstance(term, Const) and term.constant.is_bit


def apps(fun: Term, *args: Term) -> Term:
    """Left-nested application `fun a1 a2 ...`."""
    for arg in args:
        fun = App(fun, arg)
    return fun
