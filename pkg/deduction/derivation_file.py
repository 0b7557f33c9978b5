"""
Text format for derivations, one node per line::

    n1 HYP "p -> q" @ "" ;
    n2 HYP "p" @ "" ;
    n3 IMPE "q" @ "" from n1 n2 ;
    n4 IMPI "p -> q" @ "" from n3 discharge n2 ;

A line is an id, a rule token, a quoted formula, ``@`` and a quoted context, then optional
``from`` premise ids, ``discharge`` hypothesis ids and ``bind w(U)`` or ``bind n(M)``. The
last line is the conclusion. A node referenced twice is copied into both places.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set

from lark import Lark, Transformer, UnexpectedInput

from deduction.derivation import DerivationNode, Judgement
from deduction.rules import RuleId
from syntax.errors import DerivationFormatError
from syntax.formulas import NbhdVar, Variable, WorldVar, format_context, format_formula, format_label
from syntax.parser import parse_context, parse_formula, to_parse_error

logger = logging.getLogger(__name__)

DERIVATION_GRAMMAR = r"""
start: line*

line: ID RULE STRING "@" STRING premises discharges binding ";"

premises: ("from" ID+)?
discharges: ("discharge" ID+)?
binding: ("bind" VARIABLE)?

ID: /[A-Za-z_][A-Za-z0-9_]*/
RULE: /[A-Z][A-Z0-9]*/
STRING: /"[^"]*"/
VARIABLE: /[wn]\([A-Za-z][A-Za-z0-9_]*\)/
COMMENT: /%[^\n]*/

%import common.WS
%ignore WS
%ignore COMMENT
"""


@dataclass
class RawLine:
    node_id: str
    rule: str
    formula: str
    ctx: str
    premises: List[str]
    discharges: List[str]
    binding: Optional[str]
    line: int


class DerivationTransformer(Transformer):

    def start(self, items):
        return items

    def line(self, items):
        node_id, rule, formula, ctx, premises, discharges, binding = items
        return RawLine(
            str(node_id), str(rule), formula[1:-1], ctx[1:-1], premises, discharges, binding, node_id.line,
        )

    def premises(self, items):
        return [str(i) for i in items]

    def discharges(self, items):
        return [str(i) for i in items]

    def binding(self, items):
        return str(items[0]) if items else None


_parser = Lark(DERIVATION_GRAMMAR, parser="lalr", transformer=DerivationTransformer())


def _variable(text: str) -> Variable:
    name = text[2:-1]
    return WorldVar(name) if text.startswith("w") else NbhdVar(name)


def _rule(raw: RawLine) -> RuleId:
    try:
        return RuleId(raw.rule)
    except ValueError:
        raise DerivationFormatError(f"line {raw.line}: unknown rule {raw.rule}") from None


def parse_derivation(text: str) -> DerivationNode:
    """
    Read a derivation; the last line is its root.

    Raises:
        ParseError: On syntax errors, including those inside quoted formulas and contexts.
        DerivationFormatError: On unknown rules, duplicate or unknown ids and cycles.
    """
    try:
        lines: List[RawLine] = _parser.parse(text)
    except UnexpectedInput as e:
        raise to_parse_error(e, "derivation") from e
    if not lines:
        raise DerivationFormatError("derivation file has no lines")

    by_id: Dict[str, RawLine] = {}
    for raw in lines:
        if raw.node_id in by_id:
            raise DerivationFormatError(f"line {raw.line}: node id {raw.node_id} defined twice")
        by_id[raw.node_id] = raw

    built: Dict[str, DerivationNode] = {}
    visiting: Set[str] = set()

    def build(node_id: str, referrer: Optional[RawLine]) -> DerivationNode:
        if node_id in built:
            return built[node_id]
        if node_id not in by_id:
            where = f"line {referrer.line}: " if referrer else ""
            raise DerivationFormatError(f"{where}unknown node {node_id}")
        if node_id in visiting:
            raise DerivationFormatError(f"cycle through node {node_id}")
        visiting.add(node_id)
        raw = by_id[node_id]
        rule = _rule(raw)
        premises = tuple(build(p, raw) for p in raw.premises)
        is_leaf = rule in (RuleId.HYP, RuleId.PREMISE)
        result = DerivationNode(
            judgement=Judgement(parse_formula(raw.formula), parse_context(raw.ctx)),
            rule=rule,
            premises=premises,
            discharges=tuple(raw.discharges),
            binds=_variable(raw.binding) if raw.binding else None,
            hyp_id=node_id if is_leaf else None,
            node_id=node_id,
        )
        visiting.discard(node_id)
        built[node_id] = result
        return result

    root = build(lines[-1].node_id, None)
    unused = [raw.node_id for raw in lines if raw.node_id not in built]
    if unused:
        logger.warning("derivation lines not reachable from the conclusion: %s", ", ".join(unused))
    return root


def format_derivation(d: DerivationNode) -> str:
    """
    Canonical text of ``d``: premises before conclusions, hypotheses named ``h1, h2, ..``
    in order of first appearance and other nodes ``n1, n2, ..``.
    """
    hyp_names: Dict[str, str] = {}
    emitted: Set[str] = set()
    out: List[str] = []
    counter = [0]

    def hyp_name(hyp_id: str) -> str:
        if hyp_id not in hyp_names:
            hyp_names[hyp_id] = f"h{len(hyp_names) + 1}"
        return hyp_names[hyp_id]

    def emit(n: DerivationNode) -> str:
        if n.is_leaf_hypothesis:
            name = hyp_name(n.hyp_id)
            if name not in emitted:
                emitted.add(name)
                out.append(_line(name, n, [], []))
            return name
        premise_names = [emit(p) for p in n.premises]
        counter[0] += 1
        name = f"n{counter[0]}"
        out.append(_line(name, n, premise_names, [hyp_name(h) for h in n.discharges]))
        return name

    emit(d)
    return "".join(out)


def _line(name: str, n: DerivationNode, premises: List[str], discharges: List[str]) -> str:
    parts = [
        name,
        n.rule.value,
        f'"{format_formula(n.judgement.formula)}"',
        "@",
        f'"{format_context(n.judgement.ctx)}"',
    ]
    if premises:
        parts += ["from"] + premises
    if discharges:
        parts += ["discharge"] + discharges
    if n.binds is not None:
        parts += ["bind", format_label(n.binds)]
    return " ".join(parts) + " ;\n"

