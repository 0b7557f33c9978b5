import logging
from dataclasses import dataclass, field, replace
from itertools import count
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

from deduction.rules import RuleId, discharge_scope
from syntax.formulas import (
    Context,
    Formula,
    Variable,
    WorldVar,
    context_variables,
    fits,
    format_context,
    format_formula,
    free_variables,
    substitute_context,
    substitute_variable,
)

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]

LEAF_RULES = (RuleId.HYP, RuleId.PREMISE)


@dataclass(frozen=True)
class Judgement:
    """A formula asserted under a context."""
    formula: Formula
    ctx: Context = ()

    def fits(self) -> bool:
        return fits(self.formula, self.ctx)

    def variables(self) -> FrozenSet[Variable]:
        return free_variables(self.formula) | context_variables(self.ctx)

    def substitute(self, old: Variable, new: Variable) -> "Judgement":
        return Judgement(substitute_variable(self.formula, old, new), substitute_context(self.ctx, old, new))

    def __str__(self) -> str:
        return f"{format_formula(self.formula)} @ [{format_context(self.ctx)}]"


@dataclass(frozen=True)
class DerivationNode:
    """
    One rule application, with the subderivations of its premises.

    Structure:
        judgement: the conclusion of this node
        rule: the rule applied
        premises: subderivations, in the rule's premise order
        discharges: hypothesis ids closed here
        binds: the eigenvariable bound here, for the quantifier rules that bind one
        hyp_id: the hypothesis id of a HYP or PREMISE leaf
        node_id: the id the node had in a derivation file, for error messages only
    """
    judgement: Judgement
    rule: RuleId
    premises: Tuple["DerivationNode", ...] = ()
    discharges: Tuple[str, ...] = ()
    binds: Optional[Variable] = None
    hyp_id: Optional[str] = None
    node_id: Optional[str] = field(default=None, compare=False)

    @property
    def is_leaf_hypothesis(self) -> bool:
        return self.rule in LEAF_RULES

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


def node(
    rule: RuleId,
    formula: Formula,
    ctx: Context = (),
    *premises: DerivationNode,
    discharges: Tuple[str, ...] = (),
    binds: Optional[Variable] = None,
) -> DerivationNode:
    return DerivationNode(Judgement(formula, tuple(ctx)), rule, tuple(premises), tuple(discharges), binds)


def hyp(hyp_id: str, formula: Formula, ctx: Context = ()) -> DerivationNode:
    return DerivationNode(Judgement(formula, tuple(ctx)), RuleId.HYP, hyp_id=hyp_id)


def premise(hyp_id: str, formula: Formula) -> DerivationNode:
    return DerivationNode(Judgement(formula, ()), RuleId.PREMISE, hyp_id=hyp_id)


# traversal

def iter_nodes(d: DerivationNode, path: Path = ()) -> Iterator[Tuple[Path, DerivationNode]]:
    """Preorder: a node before its premises, premises left to right."""
    yield path, d
    for i, p in enumerate(d.premises):
        yield from iter_nodes(p, path + (i,))


def node_at(d: DerivationNode, path: Path) -> DerivationNode:
    for i in path:
        d = d.premises[i]
    return d


def replace_at(d: DerivationNode, path: Path, new: DerivationNode) -> DerivationNode:
    if not path:
        return new
    i = path[0]
    premises = list(d.premises)
    premises[i] = replace_at(premises[i], path[1:], new)
    return replace(d, premises=tuple(premises))


def format_path(path: Path) -> str:
    return ".".join(str(i) for i in path) if path else "root"


# hypotheses

def open_leaves(d: DerivationNode) -> List[DerivationNode]:
    """Every HYP and PREMISE leaf not discharged below the root, in preorder."""
    if d.is_leaf_hypothesis:
        return [d]
    scope = discharge_scope(d.rule)
    found = []
    for i, p in enumerate(d.premises):
        for leaf in open_leaves(p):
            if i in scope and leaf.rule is RuleId.HYP and leaf.hyp_id in d.discharges:
                continue
            found.append(leaf)
    return found


def open_hypotheses(d: DerivationNode) -> FrozenSet[Judgement]:
    return frozenset(leaf.judgement for leaf in open_leaves(d))


def hypothesis_ids(d: DerivationNode) -> Set[str]:
    return {n.hyp_id for _, n in iter_nodes(d) if n.hyp_id is not None} | {
        h for _, n in iter_nodes(d) for h in n.discharges
    }


def all_variables(d: DerivationNode) -> Set[Variable]:
    found: Set[Variable] = set()
    for _, n in iter_nodes(d):
        found |= n.judgement.variables()
        if n.binds is not None:
            found.add(n.binds)
    return found


# renaming and grafting

class FreshNames:
    """Supplies hypothesis ids and variable names unused in the given derivations."""

    def __init__(self, *derivations: DerivationNode) -> None:
        self._ids: Set[str] = set()
        self._names: Set[str] = set()
        for d in derivations:
            self.reserve(d)
        self._counter = count(1)

    def reserve(self, d: DerivationNode) -> None:
        self._ids |= hypothesis_ids(d)
        self._names |= {v.name for v in all_variables(d)}

    def hyp_id(self) -> str:
        while True:
            candidate = f"r{next(self._counter)}"
            if candidate not in self._ids:
                self._ids.add(candidate)
                return candidate

    def variable(self, like: Variable) -> Variable:
        prefix = "U" if isinstance(like, WorldVar) else "M"
        while True:
            candidate = f"{prefix}{next(self._counter)}"
            if candidate not in self._names:
                self._names.add(candidate)
                return type(like)(candidate)


def rename_hypothesis(d: DerivationNode, old: str, new: str) -> DerivationNode:
    """Rename every leaf and discharge entry with id ``old``."""
    if d.is_leaf_hypothesis:
        return replace(d, hyp_id=new) if d.hyp_id == old else d
    return replace(
        d,
        premises=tuple(rename_hypothesis(p, old, new) for p in d.premises),
        discharges=tuple(new if h == old else h for h in d.discharges),
    )


def substitute_in_tree(d: DerivationNode, old: Variable, new: Variable) -> DerivationNode:
    return replace(
        d,
        judgement=d.judgement.substitute(old, new),
        premises=tuple(substitute_in_tree(p, old, new) for p in d.premises),
        binds=new if d.binds == old else d.binds,
    )


def freshen(d: DerivationNode, names: FreshNames) -> DerivationNode:
    """Give every hypothesis id discharged inside ``d`` and every eigenvariable a fresh name."""
    premises = tuple(freshen(p, names) for p in d.premises)
    result = replace(d, premises=premises)
    scope = discharge_scope(d.rule)
    if d.discharges:
        renamed = []
        for h in d.discharges:
            fresh = names.hyp_id()
            premises = tuple(
                rename_hypothesis(p, h, fresh) if i in scope else p for i, p in enumerate(premises)
            )
            renamed.append(fresh)
        result = replace(result, premises=premises, discharges=tuple(renamed))
    if d.binds is not None:
        fresh_var = names.variable(d.binds)
        result = replace(
            result,
            premises=tuple(substitute_in_tree(p, d.binds, fresh_var) for p in result.premises),
            binds=fresh_var,
        )
    return result


def graft(d: DerivationNode, hyp_id: str, replacement: DerivationNode) -> DerivationNode:
    """
    Replace the open leaves ``hyp_id`` of ``d`` by ``replacement``.

    Leaves of that id discharged inside ``d`` are left alone.
    """
    if d.is_leaf_hypothesis:
        return replacement if d.rule is RuleId.HYP and d.hyp_id == hyp_id else d
    scope = discharge_scope(d.rule)
    premises = []
    for i, p in enumerate(d.premises):
        if i in scope and hyp_id in d.discharges:
            premises.append(p)
        else:
            premises.append(graft(p, hyp_id, replacement))
    return replace(d, premises=tuple(premises))


def relabel_variable(d: DerivationNode, old: Variable, new: Variable) -> DerivationNode:
    """Substitute ``new`` for the free variable ``old`` throughout ``d``; bound copies are kept."""
    if d.binds == old:
        return d
    return replace(
        d,
        judgement=d.judgement.substitute(old, new),
        premises=tuple(relabel_variable(p, old, new) for p in d.premises),
    )


def leaves_by_id(d: DerivationNode) -> Dict[str, List[DerivationNode]]:
    found: Dict[str, List[DerivationNode]] = {}
    for _, n in iter_nodes(d):
        if n.is_leaf_hypothesis:
            found.setdefault(n.hyp_id, []).append(n)
    return found
