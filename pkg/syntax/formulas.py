"""
Labeled formulas, labels and contexts.

A formula is a body (atom, bottom, neighbourhood atom or connective) together with an
index, the label sequence written as a postfix ``^{...}``. The index is read left to right
and evaluated from its rightmost label inwards. A context is a label sequence under which
a judgement is asserted; ``flatten`` moves it into the index in reverse order.
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import ClassVar, FrozenSet, Optional, Tuple, Union

from syntax.errors import FitError, IllFormed


class Characteristic(Enum):
    FN = "Fn"
    FW = "Fw"

    def flipped(self) -> "Characteristic":
        return Characteristic.FW if self is Characteristic.FN else Characteristic.FN


class LabelKind(Enum):
    WORLD = "world"
    NBHD = "neighbourhood"


# labels

@dataclass(frozen=True)
class AllWorlds:
    kind: ClassVar[LabelKind] = LabelKind.WORLD


@dataclass(frozen=True)
class SomeWorld:
    kind: ClassVar[LabelKind] = LabelKind.WORLD


@dataclass(frozen=True)
class WorldVar:
    name: str
    kind: ClassVar[LabelKind] = LabelKind.WORLD


@dataclass(frozen=True)
class AllNbhd:
    kind: ClassVar[LabelKind] = LabelKind.NBHD


@dataclass(frozen=True)
class SomeNbhd:
    kind: ClassVar[LabelKind] = LabelKind.NBHD


@dataclass(frozen=True)
class NbhdVar:
    name: str
    kind: ClassVar[LabelKind] = LabelKind.NBHD


@dataclass(frozen=True)
class Testimonial:
    """Neighbourhoods containing some world where ``formula`` holds."""
    formula: "Formula"
    kind: ClassVar[LabelKind] = LabelKind.NBHD


@dataclass(frozen=True)
class Believer:
    """Neighbourhoods all of whose worlds satisfy ``formula``."""
    formula: "Formula"
    kind: ClassVar[LabelKind] = LabelKind.NBHD


Label = Union[AllWorlds, SomeWorld, WorldVar, AllNbhd, SomeNbhd, NbhdVar, Testimonial, Believer]
Variable = Union[WorldVar, NbhdVar]
Index = Tuple[Label, ...]
Context = Tuple[Label, ...]

UNIVERSAL_LABELS = (AllWorlds, AllNbhd, Testimonial, Believer)
EXISTENTIAL_LABELS = (SomeWorld, SomeNbhd)
VARIABLE_LABELS = (WorldVar, NbhdVar)


# formula bodies

@dataclass(frozen=True)
class Atom:
    name: str
    index: Index = ()


@dataclass(frozen=True)
class BotN:
    index: Index = ()


@dataclass(frozen=True)
class BotW:
    index: Index = ()


@dataclass(frozen=True)
class NbhdLeq:
    """The variable's neighbourhood is contained in the selected one."""
    var: str
    index: Index = ()


@dataclass(frozen=True)
class NbhdGeq:
    """The selected neighbourhood is contained in the variable's one."""
    var: str
    index: Index = ()


@dataclass(frozen=True)
class Not:
    operand: "Formula"
    index: Index = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"
    index: Index = ()


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"
    index: Index = ()


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"
    index: Index = ()


Formula = Union[Atom, BotN, BotW, NbhdLeq, NbhdGeq, Not, And, Or, Imp]
BINARY = (And, Or, Imp)
COMPOUND = (Not, And, Or, Imp)


# index manipulation

def with_index(f: Formula, index: Index) -> Formula:
    return replace(f, index=tuple(index))


def append_labels(f: Formula, *labels: Label) -> Formula:
    return replace(f, index=f.index + tuple(labels))


def split_last(f: Formula) -> Tuple[Formula, Label]:
    """
    Peel the rightmost index label.

    Args:
        f: A formula with a non-empty index.

    Returns:
        The formula without its last label, and that label.
    """
    if not f.index:
        raise IllFormed("formula has an empty index")
    return replace(f, index=f.index[:-1]), f.index[-1]


def bottom(characteristic: Characteristic) -> Formula:
    return BotN() if characteristic is Characteristic.FN else BotW()


def is_bottom(f: Formula) -> bool:
    return isinstance(f, (BotN, BotW)) and not f.index


def as_implication(f: Formula) -> Optional[Tuple[Formula, Formula]]:
    """
    Read ``f`` as an implication, unfolding a negation into ``operand -> bottom``.

    Returns:
        ``(antecedent, consequent)`` or None if ``f`` is neither form at top level.
    """
    if f.index:
        return None
    if isinstance(f, Imp):
        return f.left, f.right
    if isinstance(f, Not):
        return f.operand, bottom(characteristic(f.operand))
    return None


def same_implication(a: Formula, b: Formula) -> bool:
    """Equality up to reading negations as implications into bottom."""
    if a == b:
        return True
    ia, ib = as_implication(a), as_implication(b)
    return ia is not None and ia == ib


# characteristic and flattening

def _base_characteristic(f: Formula) -> Characteristic:
    if isinstance(f, (Atom, BotN)):
        return Characteristic.FN
    if isinstance(f, (BotW, NbhdLeq, NbhdGeq)):
        return Characteristic.FW
    if isinstance(f, Not):
        return characteristic(f.operand)
    if isinstance(f, BINARY):
        left = characteristic(f.left)
        right = characteristic(f.right)
        if left is not right:
            raise IllFormed(
                f"operands of {type(f).__name__} have characteristics {left.value} and {right.value}"
            )
        return left
    raise IllFormed(f"not a formula: {f!r}")


def _check_label(label: Label) -> None:
    if isinstance(label, (Testimonial, Believer)):
        if characteristic(label.formula) is not Characteristic.FN:
            raise IllFormed("testimonial and believer payloads must have characteristic Fn")
    elif isinstance(label, (WorldVar, NbhdVar)):
        if not label.name:
            raise IllFormed("variable without a name")
    elif not isinstance(label, (AllWorlds, SomeWorld, AllNbhd, SomeNbhd)):
        raise IllFormed(f"not a label: {label!r}")


def walk_index(start: Characteristic, labels: Tuple[Label, ...]) -> Characteristic:
    """Apply the alternation discipline to ``labels`` starting from ``start``."""
    current = start
    for label in labels:
        _check_label(label)
        if label.kind is LabelKind.WORLD and current is not Characteristic.FN:
            raise IllFormed("a world label can only be attached to an Fn formula")
        if label.kind is LabelKind.NBHD and current is not Characteristic.FW:
            raise IllFormed("a neighbourhood label can only be attached to an Fw formula")
        current = current.flipped()
    return current


def characteristic(f: Formula) -> Characteristic:
    """
    Classify ``f`` as evaluated at models (Fn) or at templates (Fw).

    Raises:
        IllFormed: If alternation or operand characteristics are violated.
    """
    return walk_index(_base_characteristic(f), f.index)


def validate_context(ctx: Context) -> None:
    """Contexts start with a neighbourhood label and alternate kinds."""
    expected = LabelKind.NBHD
    for label in ctx:
        _check_label(label)
        if label.kind is not expected:
            raise IllFormed("context labels must alternate, starting with a neighbourhood label")
        expected = LabelKind.WORLD if expected is LabelKind.NBHD else LabelKind.NBHD


def flatten(f: Formula, ctx: Context) -> Formula:
    """
    Move ``ctx`` into the index of ``f``, last context label first.

    Raises:
        FitError: If ``f`` does not fit ``ctx``.
    """
    try:
        validate_context(ctx)
        flat = append_labels(f, *reversed(tuple(ctx)))
        result = characteristic(flat)
    except IllFormed as e:
        raise FitError(f"formula does not fit its context: {e}") from e
    if result is not Characteristic.FN:
        raise FitError("formula does not fit its context: parity mismatch")
    return flat


def fits(f: Formula, ctx: Context) -> bool:
    try:
        flatten(f, ctx)
    except FitError:
        return False
    return True


# variables

def _label_variables(label: Label) -> FrozenSet[Variable]:
    if isinstance(label, VARIABLE_LABELS):
        return frozenset([label])
    if isinstance(label, (Testimonial, Believer)):
        return free_variables(label.formula)
    return frozenset()


def free_variables(f: Formula) -> FrozenSet[Variable]:
    found = set()
    for label in f.index:
        found |= _label_variables(label)
    if isinstance(f, (NbhdLeq, NbhdGeq)):
        found.add(NbhdVar(f.var))
    elif isinstance(f, Not):
        found |= free_variables(f.operand)
    elif isinstance(f, BINARY):
        found |= free_variables(f.left) | free_variables(f.right)
    return frozenset(found)


def context_variables(ctx: Context) -> FrozenSet[Variable]:
    found = set()
    for label in ctx:
        found |= _label_variables(label)
    return frozenset(found)


def is_sentence(f: Formula) -> bool:
    """True iff ``f`` has no variable labels and no neighbourhood atoms."""
    if isinstance(f, (NbhdLeq, NbhdGeq)):
        return False
    for label in f.index:
        if isinstance(label, VARIABLE_LABELS):
            return False
        if isinstance(label, (Testimonial, Believer)) and not is_sentence(label.formula):
            return False
    if isinstance(f, Not):
        return is_sentence(f.operand)
    if isinstance(f, BINARY):
        return is_sentence(f.left) and is_sentence(f.right)
    return True


def substitute_label(label: Label, old: Variable, new: Variable) -> Label:
    if label == old:
        return new
    if isinstance(label, Testimonial):
        return Testimonial(substitute_variable(label.formula, old, new))
    if isinstance(label, Believer):
        return Believer(substitute_variable(label.formula, old, new))
    return label


def substitute_variable(f: Formula, old: Variable, new: Variable) -> Formula:
    """Rename every occurrence of the variable ``old`` to ``new``."""
    index = tuple(substitute_label(label, old, new) for label in f.index)
    if isinstance(f, (NbhdLeq, NbhdGeq)):
        var = f.var
        if isinstance(old, NbhdVar) and old.name == var and isinstance(new, NbhdVar):
            var = new.name
        return replace(f, var=var, index=index)
    if isinstance(f, Not):
        return Not(substitute_variable(f.operand, old, new), index)
    if isinstance(f, BINARY):
        return type(f)(
            substitute_variable(f.left, old, new),
            substitute_variable(f.right, old, new),
            index,
        )
    return replace(f, index=index)


def substitute_context(ctx: Context, old: Variable, new: Variable) -> Context:
    return tuple(substitute_label(label, old, new) for label in ctx)


def has_universal(ctx: Context) -> bool:
    return any(isinstance(label, UNIVERSAL_LABELS) for label in ctx)


def has_existential(ctx: Context) -> bool:
    return any(isinstance(label, EXISTENTIAL_LABELS) for label in ctx)


def atoms_of(f: Formula) -> FrozenSet[str]:
    found = set()
    for label in f.index:
        if isinstance(label, (Testimonial, Believer)):
            found |= atoms_of(label.formula)
    if isinstance(f, Atom):
        found.add(f.name)
    elif isinstance(f, Not):
        found |= atoms_of(f.operand)
    elif isinstance(f, BINARY):
        found |= atoms_of(f.left) | atoms_of(f.right)
    return frozenset(found)


def size(f: Formula) -> int:
    total = 1 + sum(size(label.formula) for label in f.index if isinstance(label, (Testimonial, Believer)))
    total += len(f.index)
    if isinstance(f, Not):
        total += size(f.operand)
    elif isinstance(f, BINARY):
        total += size(f.left) + size(f.right)
    return total


# printing

_PRECEDENCE = {Imp: 1, Or: 2, And: 3, Not: 4}
_ATOMIC = 5


def _precedence(f: Formula) -> int:
    if f.index:
        return _ATOMIC
    return _PRECEDENCE.get(type(f), _ATOMIC)


def format_label(label: Label) -> str:
    if isinstance(label, AllWorlds):
        return "*"
    if isinstance(label, SomeWorld):
        return "+"
    if isinstance(label, AllNbhd):
        return "@"
    if isinstance(label, SomeNbhd):
        return "#"
    if isinstance(label, WorldVar):
        return f"w({label.name})"
    if isinstance(label, NbhdVar):
        return f"n({label.name})"
    if isinstance(label, Testimonial):
        return f"T({format_formula(label.formula)})"
    if isinstance(label, Believer):
        return f"B({format_formula(label.formula)})"
    raise IllFormed(f"not a label: {label!r}")


def format_context(ctx: Context) -> str:
    return ",".join(format_label(label) for label in ctx)


def _wrap(f: Formula, parenthesize: bool) -> str:
    text = format_formula(f)
    return f"({text})" if parenthesize else text


def _format_body(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, BotN):
        return "botN"
    if isinstance(f, BotW):
        return "botW"
    if isinstance(f, NbhdLeq):
        return f"leq(n({f.var}))"
    if isinstance(f, NbhdGeq):
        return f"geq(n({f.var}))"
    if isinstance(f, Not):
        return "~" + _wrap(f.operand, _precedence(f.operand) < 4)
    if isinstance(f, And):
        return f"{_wrap(f.left, _precedence(f.left) < 3)} & {_wrap(f.right, _precedence(f.right) <= 3)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left, _precedence(f.left) < 2)} | {_wrap(f.right, _precedence(f.right) <= 2)}"
    if isinstance(f, Imp):
        return f"{_wrap(f.left, _precedence(f.left) <= 1)} -> {format_formula(f.right)}"
    raise IllFormed(f"not a formula: {f!r}")


def format_formula(f: Formula) -> str:
    """Canonical text of ``f``; ``parse_formula`` reads it back to an equal formula."""
    if not f.index:
        return _format_body(f)
    body = _format_body(replace(f, index=()))
    if isinstance(f, COMPOUND):
        body = f"({body})"
    return body + "^{" + ",".join(format_label(label) for label in f.index) + "}"
