"""Redex selection and single-rule contraction for the history-track machine."""

from __future__ import annotations
import logging
from dataclasses import dataclass, field
from quantum_lambda._compat import StrEnum

from quantum_lambda.errors import QuantumLambdaError
from quantum_lambda.gates import gate_arity
from quantum_lambda.syntax.operations import (
    contains_bang,
    erase_keep,
    is_value,
    occurs,
    replace_at,
    substitute,
    subterm_at,
)
from quantum_lambda.syntax.shapes import list_items, read_nat
from quantum_lambda.syntax.terms import (
    PLACEHOLDER,
    App,
    Bang,
    BangLam,
    Calculus,
    Const,
    ConstantId,
    Lam,
    Path,
    Term,
    is_bit,
)

logger = logging.getLogger(__name__)

# bound on the classical steps spent decoding a cphase numeral
NUMERAL_BUDGET = 10_000


class IllFormedRegisterError(QuantumLambdaError):
    """A λ_q register reached a linear β whose variable does not occur."""


class CalculusError(QuantumLambdaError):
    """A λ_q construct (`!` or `λ!`) appeared in a λ_i program."""


class RuleTag(StrEnum):
    APP1 = "App1"
    APP2 = "App2"
    BETA1 = "Beta1"
    BETA2 = "Beta2"
    BANG_BETA1 = "BangBeta1"
    BANG_BETA2 = "BangBeta2"
    GATE = "Gate"
    ID = "Id"


@dataclass(frozen=True)
class StepRule:
    """The rule fired at `path` of the shared register shape.

    `path` only descends through applications; each 0 step is an (app₁) and each 1 step an
    (app₂) around the core rule.
    """

    tag: RuleTag
    path: Path = ()
    gate: ConstantId | None = None
    parameter: int | None = None
    slots: tuple[Path, ...] = field(default=())

    @property
    def congruence_rules(self) -> tuple[RuleTag, ...]:
        return tuple(RuleTag.APP1 if step == 0 else RuleTag.APP2 for step in self.path)

    def describe(self) -> str:
        name = self.tag.value
        if self.gate is not None:
            name += f"[{self.gate.value}" + (
                f"({self.parameter})]" if self.parameter is not None else "]"
            )
        return name


ID_RULE = StepRule(RuleTag.ID)


def select_redex(register: Term, calculus: Calculus) -> StepRule:
    """Find the unique call-by-value redex of a register shape.

    The leftmost non-value position of applications is entered, operator before operand,
    until an application of values is found. When the register is a value or no rule
    matches, the (Id) rule is returned.

    Raises:
        CalculusError: If a λ_i register contains `!` or `λ!`.
        IllFormedRegisterError: In λ_q, on a linear β whose variable does not occur.
    """
    if calculus is Calculus.I and contains_bang(register):
        raise CalculusError("λ_i programs may not use ! or \\!")
    return _select(register, (), calculus) or ID_RULE


def _select(term: Term, path: Path, calculus: Calculus) -> StepRule | None:
    if not isinstance(term, App) or is_value(term, calculus):
        return None
    fun, arg = term.fun, term.arg
    if not is_value(fun, calculus):
        return _select(fun, path + (0,), calculus)
    if not is_value(arg, calculus):
        return _select(arg, path + (1,), calculus)
    match fun:
        case Lam(body):
            if occurs(body):
                return StepRule(RuleTag.BETA1, path)
            if calculus is Calculus.Q:
                raise IllFormedRegisterError(f"Linear abstraction at {path} discards its argument")
            return StepRule(RuleTag.BETA2, path)
        case BangLam(body):
            if not isinstance(arg, Bang):
                return None
            tag = RuleTag.BANG_BETA1 if occurs(body) else RuleTag.BANG_BETA2
            return StepRule(tag, path)
        case Const(constant):
            return _select_gate(constant, None, arg, path)
        case App(Const(ConstantId.CPHASE), Bang(numeral)):
            parameter = read_nat(numeral, lambda t: normalize_definite(t, calculus))
            if parameter is None or parameter < 1:
                return None
            return _select_gate(ConstantId.CPHASE, parameter, arg, path)
    return None


def _select_gate(
    constant: ConstantId, parameter: int | None, operand: Term, path: Path
) -> StepRule | None:
    if constant.is_bit:
        return None
    arity = gate_arity(constant)
    if constant is ConstantId.CPHASE and parameter is None:
        return None
    if arity == 1:
        if not is_bit(operand):
            return None
        slots: tuple[Path, ...] = (path + (1,),)
    else:
        items = list_items(operand, limit=arity)
        if items is None or len(items) != arity or not all(is_bit(item) for _, item in items):
            return None
        slots = tuple(path + (1,) + item_path for item_path, _ in items)
    return StepRule(RuleTag.GATE, path, gate=constant, parameter=parameter, slots=slots)


def contract(redex: Term, rule: StepRule) -> tuple[Term, Term]:
    """Apply a classical rule to the redex itself.

    Returns:
        The contractum and the core history frame, before (app₁)/(app₂) wrapping.
    """
    if not isinstance(redex, App):
        raise ValueError(f"Rule {rule.tag} needs an application, got {redex!r}")
    fun, arg = redex.fun, redex.arg
    match rule.tag, fun:
        case RuleTag.BETA1, Lam(body, hint):
            return substitute(body, arg), App(Lam(erase_keep(body), hint), PLACEHOLDER)
        case RuleTag.BETA2, Lam(body, hint):
            return substitute(body, arg), App(Lam(PLACEHOLDER, hint), arg)
        case RuleTag.BANG_BETA1, BangLam(body, hint) if isinstance(arg, Bang):
            frame = App(BangLam(erase_keep(body), hint), PLACEHOLDER)
            return substitute(body, arg.body), frame
        case RuleTag.BANG_BETA2, BangLam(body, hint) if isinstance(arg, Bang):
            return substitute(body, arg.body), App(BangLam(PLACEHOLDER, hint), arg)
    raise ValueError(f"Rule {rule.tag} does not apply to {redex!r}")


def gate_frame(redex: Term) -> Term:
    """The core frame `(c_U φ)` of a gate step; the operator is kept, the operand erased."""
    if not isinstance(redex, App):
        raise ValueError(f"Gate step needs an application, got {redex!r}")
    return App(redex.fun, PLACEHOLDER)


def contract_gate(register: Term, path: Path) -> Term:
    """Replace the gate application at `path` with its operand, `(c_U v) → v`."""
    redex = subterm_at(register, path)
    if not isinstance(redex, App):
        raise ValueError(f"Gate step needs an application, got {redex!r}")
    return replace_at(register, path, redex.arg)


def wrap_frame(core: Term, path: Path) -> Term:
    """Surround a core frame with `(h φ)` / `(φ h)` layers for each step of `path`."""
    frame = core
    for step in reversed(path):
        frame = App(frame, PLACEHOLDER) if step == 0 else App(PLACEHOLDER, frame)
    return frame


def normalize_definite(
    term: Term, calculus: Calculus, budget: int = NUMERAL_BUDGET
) -> Term | None:
    """Evaluate a definite gate-free term to a value.

    Returns None when the term sticks, reaches a gate or exhausts `budget`.
    """
    for _ in range(budget):
        rule = _select(term, (), calculus)
        if rule is None:
            return term if is_value(term, calculus) else None
        if rule.tag is RuleTag.GATE:
            return None
        contractum, _ = contract(subterm_at(term, rule.path), rule)
        term = replace_at(term, rule.path, contractum)
    logger.debug("Numeral normalization exceeded %d steps", budget)
    return None
