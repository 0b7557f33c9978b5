"""
Lewis-style conditional formulas and their encoding into labeled formulas.

Surface syntax extends the propositional core with ``A =< B`` (A is at least as possible as
B), ``A []-> B`` (would) and ``A <>-> B`` (might). The three bind tighter than ``&``, ``|``
and ``->``.
"""
import logging
import random
from dataclasses import dataclass
from typing import Sequence, Union

from lark import Lark, Transformer, UnexpectedInput, v_args

from syntax.formulas import (
    AllNbhd,
    AllWorlds,
    And,
    Atom,
    Formula,
    Imp,
    Not,
    Or,
    SomeNbhd,
    SomeWorld,
    append_labels,
    with_index,
)
from syntax.parser import to_parse_error

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VAtom:
    name: str


@dataclass(frozen=True)
class VNot:
    operand: "VFormula"


@dataclass(frozen=True)
class VAnd:
    left: "VFormula"
    right: "VFormula"


@dataclass(frozen=True)
class VOr:
    left: "VFormula"
    right: "VFormula"


@dataclass(frozen=True)
class VImp:
    left: "VFormula"
    right: "VFormula"


@dataclass(frozen=True)
class CompPoss:
    """``psi`` is at least as possible as ``phi``; written ``psi =< phi``."""
    phi: "VFormula"
    psi: "VFormula"


@dataclass(frozen=True)
class Would:
    antecedent: "VFormula"
    consequent: "VFormula"


@dataclass(frozen=True)
class Might:
    antecedent: "VFormula"
    consequent: "VFormula"


VFormula = Union[VAtom, VNot, VAnd, VOr, VImp, CompPoss, Would, Might]


def _possibly(f: Formula) -> Formula:
    return append_labels(f, SomeWorld())


def encode(v: VFormula) -> Formula:
    """
    The labeled Fn formula expressing ``v``.

    ``psi =< phi`` becomes ``(phi^{+} -> psi^{+})^{@}``. A would-conditional holds when no
    neighbourhood has an antecedent world, or some neighbourhood has one and the material
    conditional holds throughout it. A might-conditional is the negated would-conditional
    with negated consequent.
    """
    if isinstance(v, VAtom):
        return Atom(v.name)
    if isinstance(v, VNot):
        return Not(encode(v.operand))
    if isinstance(v, VAnd):
        return And(encode(v.left), encode(v.right))
    if isinstance(v, VOr):
        return Or(encode(v.left), encode(v.right))
    if isinstance(v, VImp):
        return Imp(encode(v.left), encode(v.right))
    if isinstance(v, CompPoss):
        return with_index(Imp(_possibly(encode(v.phi)), _possibly(encode(v.psi))), (AllNbhd(),))
    if isinstance(v, Would):
        a, c = encode(v.antecedent), encode(v.consequent)
        vacuous = append_labels(Not(_possibly(a)), AllNbhd())
        witnessed = append_labels(And(_possibly(a), append_labels(Imp(a, c), AllWorlds())), SomeNbhd())
        return Or(vacuous, witnessed)
    if isinstance(v, Might):
        return Not(encode(Would(v.antecedent, VNot(v.consequent))))
    raise TypeError(f"not a conditional formula: {v!r}")


# surface syntax

V_GRAMMAR = r"""
?start: imp

?imp: or_
    | or_ "->" imp        -> imp

?or_: and_
    | or_ "|" and_        -> or_

?and_: cond
     | and_ "&" cond      -> and_

?cond: unary
     | unary "=<" unary   -> comp
     | unary "[]->" unary -> would
     | unary "<>->" unary -> might

?unary: "~" unary         -> not_
      | NAME              -> atom
      | "(" imp ")"

NAME: /[a-z][a-z0-9_]*/

%import common.WS
%ignore WS
"""


@v_args(inline=True)
class VFormulaTransformer(Transformer):

    def atom(self, name):
        return VAtom(str(name))

    def not_(self, operand):
        return VNot(operand)

    def and_(self, left, right):
        return VAnd(left, right)

    def or_(self, left, right):
        return VOr(left, right)

    def imp(self, left, right):
        return VImp(left, right)

    def comp(self, more_possible, other):
        return CompPoss(phi=other, psi=more_possible)

    def would(self, antecedent, consequent):
        return Would(antecedent, consequent)

    def might(self, antecedent, consequent):
        return Might(antecedent, consequent)


_parser = Lark(V_GRAMMAR, parser="lalr", transformer=VFormulaTransformer())


def parse_vformula(text: str) -> VFormula:
    try:
        return _parser.parse(text)
    except UnexpectedInput as e:
        raise to_parse_error(e, "conditional formula") from e


_PRECEDENCE = {VImp: 1, VOr: 2, VAnd: 3, CompPoss: 4, Would: 4, Might: 4, VNot: 5}


def _prec(v: VFormula) -> int:
    return _PRECEDENCE.get(type(v), 6)


def _wrap(v: VFormula, parenthesize: bool) -> str:
    text = format_vformula(v)
    return f"({text})" if parenthesize else text


def format_vformula(v: VFormula) -> str:
    if isinstance(v, VAtom):
        return v.name
    if isinstance(v, VNot):
        return "~" + _wrap(v.operand, _prec(v.operand) < 5)
    if isinstance(v, VAnd):
        return f"{_wrap(v.left, _prec(v.left) < 3)} & {_wrap(v.right, _prec(v.right) <= 3)}"
    if isinstance(v, VOr):
        return f"{_wrap(v.left, _prec(v.left) < 2)} | {_wrap(v.right, _prec(v.right) <= 2)}"
    if isinstance(v, VImp):
        return f"{_wrap(v.left, _prec(v.left) <= 1)} -> {format_vformula(v.right)}"
    if isinstance(v, CompPoss):
        return f"{_wrap(v.psi, _prec(v.psi) <= 4)} =< {_wrap(v.phi, _prec(v.phi) <= 4)}"
    if isinstance(v, (Would, Might)):
        arrow = "[]->" if isinstance(v, Would) else "<>->"
        left, right = v.antecedent, v.consequent
        return f"{_wrap(left, _prec(left) <= 4)} {arrow} {_wrap(right, _prec(right) <= 4)}"
    raise TypeError(f"not a conditional formula: {v!r}")


class VFormulaGenerator:
    """Deterministic random conditional formulas over ``atoms``."""

    def __init__(self, atoms: Sequence[str] = ("p", "q"), seed: int = 0) -> None:
        self.atoms = tuple(atoms)
        self._rng = random.Random(seed)

    def formula(self, depth: int) -> VFormula:
        if depth <= 0:
            return VAtom(self._rng.choice(self.atoms))
        choice = self._rng.randrange(9)
        sub = depth - 1
        if choice == 0:
            return VNot(self.formula(sub))
        if choice == 1:
            return VAnd(self.formula(sub), self.formula(sub))
        if choice == 2:
            return VOr(self.formula(sub), self.formula(sub))
        if choice == 3:
            return VImp(self.formula(sub), self.formula(sub))
        if choice == 4:
            return CompPoss(self.formula(sub), self.formula(sub))
        if choice == 5:
            return Would(self.formula(sub), self.formula(sub))
        if choice == 6:
            return Might(self.formula(sub), self.formula(sub))
        return VAtom(self._rng.choice(self.atoms))
