import logging
from typing import Tuple

from lark import Lark, Transformer, UnexpectedInput

from syntax.errors import ParseError
from syntax.formulas import (
    AllNbhd,
    AllWorlds,
    And,
    Atom,
    Believer,
    BotN,
    BotW,
    Context,
    Formula,
    Imp,
    NbhdGeq,
    NbhdLeq,
    NbhdVar,
    Not,
    Or,
    SomeNbhd,
    SomeWorld,
    Testimonial,
    WorldVar,
    append_labels,
    characteristic,
    validate_context,
)

logger = logging.getLogger(__name__)

FORMULA_GRAMMAR = r"""
start_formula: formula
start_context: [label_list]

?formula: disjunction
        | disjunction "->" formula            -> imp

?disjunction: conjunction
            | disjunction "|" conjunction     -> or_

?conjunction: negation
            | conjunction "&" negation        -> and_

?negation: postfix
         | "~" negation                       -> not_

?postfix: primary
        | postfix "^{" label_list "}"         -> indexed

?primary: NAME                                -> atom
        | BOT_N                               -> bot_n
        | BOT_W                               -> bot_w
        | LEQ                                 -> leq
        | GEQ                                 -> geq
        | "(" formula ")"

label_list: label ("," label)*

label: "*"                                    -> all_worlds
     | "+"                                    -> some_world
     | "@"                                    -> all_nbhd
     | "#"                                    -> some_nbhd
     | WORLD_VAR                              -> world_var
     | NBHD_VAR                               -> nbhd_var
     | "T(" formula ")"                       -> testimonial
     | "B(" formula ")"                       -> believer

BOT_N.2: "botN"
BOT_W.2: "botW"
LEQ.2: /leq\(n\([A-Za-z][A-Za-z0-9_]*\)\)/
GEQ.2: /geq\(n\([A-Za-z][A-Za-z0-9_]*\)\)/
WORLD_VAR.2: /w\([A-Za-z][A-Za-z0-9_]*\)/
NBHD_VAR.2: /n\([A-Za-z][A-Za-z0-9_]*\)/
NAME: /[a-z][a-z0-9_]*/

%import common.WS
%ignore WS
"""


def _inner_name(token: str, prefix: str, suffix: str) -> str:
    return str(token)[len(prefix):len(token) - len(suffix)]


class FormulaTransformer(Transformer):
    """Builds formula and label values from the parse tree."""

    def start_formula(self, items):
        return items[0]

    def start_context(self, items):
        return tuple(items[0]) if items and items[0] is not None else ()

    def imp(self, items):
        return Imp(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def not_(self, items):
        return Not(items[0])

    def indexed(self, items):
        base, labels = items
        return append_labels(base, *labels)

    def atom(self, items):
        return Atom(str(items[0]))

    def bot_n(self, _items):
        return BotN()

    def bot_w(self, _items):
        return BotW()

    def leq(self, items):
        return NbhdLeq(_inner_name(items[0], "leq(n(", "))"))

    def geq(self, items):
        return NbhdGeq(_inner_name(items[0], "geq(n(", "))"))

    def label_list(self, items):
        return tuple(items)

    def all_worlds(self, _items):
        return AllWorlds()

    def some_world(self, _items):
        return SomeWorld()

    def all_nbhd(self, _items):
        return AllNbhd()

    def some_nbhd(self, _items):
        return SomeNbhd()

    def world_var(self, items):
        return WorldVar(_inner_name(items[0], "w(", ")"))

    def nbhd_var(self, items):
        return NbhdVar(_inner_name(items[0], "n(", ")"))

    def testimonial(self, items):
        return Testimonial(items[0])

    def believer(self, items):
        return Believer(items[0])


_parser = Lark(
    FORMULA_GRAMMAR,
    start=["start_formula", "start_context"],
    parser="lalr",
    transformer=FormulaTransformer(),
)


def to_parse_error(e: UnexpectedInput, what: str) -> ParseError:
    position = getattr(e, "pos_in_stream", None)
    if position is not None and position < 0:
        position = None
    return ParseError(
        f"malformed {what}",
        position=position,
        line=getattr(e, "line", None),
        column=getattr(e, "column", None),
    )


def parse_formula(text: str) -> Formula:
    """
    Parse the ASCII formula syntax.

    Args:
        text: e.g. ``"(p^{+} -> q^{+})^{@}"``.

    Returns:
        The formula, checked for well-formedness.

    Raises:
        ParseError: If ``text`` is not in the grammar.
        IllFormed: If the formula violates alternation.
    """
    try:
        f = _parser.parse(text, start="start_formula")
    except UnexpectedInput as e:
        raise to_parse_error(e, "formula") from e
    characteristic(f)
    logger.debug("parsed formula %r", text)
    return f


def parse_context(text: str) -> Context:
    """Parse a comma-separated label list; the empty string is the empty context."""
    if not text.strip():
        return ()
    try:
        ctx: Tuple = _parser.parse(text, start="start_context")
    except UnexpectedInput as e:
        raise to_parse_error(e, "context") from e
    validate_context(ctx)
    return ctx
