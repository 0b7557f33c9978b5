"""
Detour and permutation reductions.

A redex is an elimination whose major premise (premise 0) is concluded by the matching
introduction, or by a case split in the permutation case. Redexes are found in preorder, so
the first one listed is the outermost-leftmost. Bound hypothesis ids and eigenvariables are
renamed apart before a subderivation is grafted into another.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from deduction.derivation import (
    DerivationNode,
    FreshNames,
    Path,
    format_path,
    freshen,
    graft,
    iter_nodes,
    node_at,
    relabel_variable,
    replace_at,
)
from deduction.rules import CASE_SPLITS, RuleId, discharge_scope
from syntax.errors import StaleRedex, StepBudgetExceeded
from syntax.formulas import SomeWorld, WorldVar

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 100_000


class RedexKind(Enum):
    INTRO_ELIM = "IntroElim"
    T_33_34 = "T_33_34"
    B_37_38 = "B_37_38"
    PERMUTATION = "Permutation"


@dataclass(frozen=True)
class Redex:
    """
    A reducible node.

    Structure:
        kind: which family of reduction applies
        path: premise indices from the root to the elimination
        detail: the connective or label of an IntroElim detour, the elimination rule token of
            a permutation, empty otherwise
    """
    kind: RedexKind
    path: Path
    detail: str = ""

    def __str__(self) -> str:
        name = f"{self.kind.value}({self.detail})" if self.detail else self.kind.value
        return f"{name} at {format_path(self.path)}"


# elimination -> (matching introductions, connective shown in the redex)
DETOURS: Dict[RuleId, Tuple[Tuple[RuleId, ...], str]] = {
    RuleId.AND_E_L: ((RuleId.AND_I,), "&"),
    RuleId.AND_E_R: ((RuleId.AND_I,), "&"),
    RuleId.IMP_E: ((RuleId.IMP_I,), "->"),
    RuleId.OR_E: ((RuleId.OR_I_L, RuleId.OR_I_R), "|"),
    RuleId.ALL_W_E: ((RuleId.ALL_W_I,), "*"),
    RuleId.SOME_W_E: ((RuleId.SOME_W_I,), "+"),
    RuleId.ALL_N_E: ((RuleId.ALL_N_I,), "@"),
    RuleId.SOME_N_E: ((RuleId.SOME_N_I,), "#"),
    RuleId.L2C: ((RuleId.C2L,), "label"),
    RuleId.C2L: ((RuleId.L2C,), "label"),
}

ELIMINATIONS = frozenset({
    RuleId.AND_E_L, RuleId.AND_E_R, RuleId.IMP_E, RuleId.OR_E, RuleId.SOME_W_E, RuleId.SOME_N_E,
    RuleId.ALL_W_E, RuleId.ALL_N_E, RuleId.T_E, RuleId.B_E,
    RuleId.BOT_N_E, RuleId.BOT_W_E, RuleId.BOT_TRANSFER,
})


def redex_at(n: DerivationNode, path: Path = ()) -> Optional[Redex]:
    """The redex rooted at ``n``, if any."""
    if not n.premises:
        return None
    major = n.premises[0].rule
    if n.rule in DETOURS:
        intros, connective = DETOURS[n.rule]
        if major in intros:
            return Redex(RedexKind.INTRO_ELIM, path, connective)
    if n.rule is RuleId.T_E and major is RuleId.T_I:
        return Redex(RedexKind.T_33_34, path)
    if n.rule is RuleId.B_E and major is RuleId.B_I:
        return Redex(RedexKind.B_37_38, path)
    if n.rule in ELIMINATIONS and major in CASE_SPLITS:
        return Redex(RedexKind.PERMUTATION, path, n.rule.value)
    return None


def find_redexes(d: DerivationNode) -> List[Redex]:
    """Every redex of ``d``, outermost first, left to right."""
    found = []
    for path, n in iter_nodes(d):
        r = redex_at(n, path)
        if r is not None:
            found.append(r)
    return found


def _graft_all(d: DerivationNode, ids, replacement: DerivationNode) -> DerivationNode:
    for h in ids:
        d = graft(d, h, replacement)
    return d


def _ids_in(d: DerivationNode, ids) -> Tuple[str, ...]:
    present = {n.hyp_id for _, n in iter_nodes(d) if n.rule is RuleId.HYP}
    return tuple(h for h in ids if h in present)


def _contract_detour(n: DerivationNode) -> DerivationNode:
    intro = n.premises[0]
    rule = n.rule
    if rule in (RuleId.AND_E_L, RuleId.AND_E_R):
        return intro.premises[0 if rule is RuleId.AND_E_L else 1]
    if rule is RuleId.IMP_E:
        return _graft_all(intro.premises[0], intro.discharges, n.premises[1])
    if rule is RuleId.OR_E:
        case = n.premises[1] if intro.rule is RuleId.OR_I_L else n.premises[2]
        return _graft_all(case, _ids_in(case, n.discharges), intro.premises[0])
    if rule is RuleId.ALL_W_E:
        above = intro.premises[0]
        target = n.judgement.ctx[-1]
        if isinstance(target, WorldVar):
            return relabel_variable(above, intro.binds, target)
        return replace(n, rule=RuleId.SOME_W_I, premises=(above,))
    if rule is RuleId.ALL_N_E:
        return relabel_variable(intro.premises[0], intro.binds, n.judgement.ctx[-1])
    if rule in (RuleId.SOME_W_E, RuleId.SOME_N_E):
        witness = intro.premises[0]
        value = witness.judgement.ctx[-1]
        minor = relabel_variable(n.premises[1], n.binds, value)
        return _graft_all(minor, n.discharges, witness)
    if rule in (RuleId.L2C, RuleId.C2L):
        return intro.premises[0]
    raise StaleRedex(f"no detour contraction for {rule.value}")


def _contract_permutation(n: DerivationNode) -> DerivationNode:
    split = n.premises[0]
    cases = discharge_scope(split.rule)
    premises = []
    for i, p in enumerate(split.premises):
        if i in cases:
            premises.append(replace(n, premises=(p,) + n.premises[1:]))
        else:
            premises.append(p)
    return replace(split, judgement=n.judgement, premises=tuple(premises), node_id=None)


def reduce_step(d: DerivationNode, r: Redex) -> DerivationNode:
    """
    Contract ``r`` in ``d``.

    Raises:
        StaleRedex: If no redex of that kind sits at ``r.path``.
    """
    try:
        target = node_at(d, r.path)
    except IndexError:
        raise StaleRedex(f"no node at {format_path(r.path)}") from None
    current = redex_at(target, r.path)
    if current != r:
        raise StaleRedex(f"{r} no longer matches")

    fresh = freshen(target, FreshNames(d))
    if r.kind is RedexKind.PERMUTATION:
        contracted = _contract_permutation(fresh)
    elif r.kind in (RedexKind.T_33_34, RedexKind.B_37_38):
        contracted = fresh.premises[0].premises[0]
    else:
        contracted = _contract_detour(fresh)
    logger.debug("contracted %s", r)
    return replace_at(d, r.path, contracted)


def normalize_with_trace(
    d: DerivationNode, budget: int = DEFAULT_BUDGET
) -> Tuple[DerivationNode, List[Redex]]:
    """
    Reduce outermost-first until no redex is left.

    Returns:
        The normal form and the redexes contracted, in order.

    Raises:
        StepBudgetExceeded: After ``budget`` contractions without reaching a normal form.
    """
    trace: List[Redex] = []
    while True:
        redexes = find_redexes(d)
        if not redexes:
            logger.info("normal form reached after %d steps", len(trace))
            return d, trace
        if len(trace) >= budget:
            logger.warning("normalization stopped after %d steps", budget)
            raise StepBudgetExceeded(f"no normal form within {budget} steps")
        d = reduce_step(d, redexes[0])
        trace.append(redexes[0])


def normalize(d: DerivationNode, budget: int = DEFAULT_BUDGET) -> DerivationNode:
    return normalize_with_trace(d, budget)[0]
