"""
Derivation checker.

Each node is turned into an ``Application``: its conclusion, the judgements of its premises
and the hypotheses each premise leaves open or has discharged here. The rule's schema is
checked on the application alone, so the rule audit can check generated applications the same
way. Hypothesis-id consistency is then checked over the whole tree. Findings are collected
into a ``CheckReport``, never raised.

Context variables are read as names of objects that exist. A variable label may therefore
only follow other variable labels, and a rule that drops a variable from view must leave it
anchored in its conclusion or an open hypothesis.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple

from deduction.derivation import (
    DerivationNode,
    Judgement,
    Path,
    format_path,
    iter_nodes,
    leaves_by_id,
    open_hypotheses,
    open_leaves,
)
from deduction.rules import (
    BINDERS,
    NEGATIVEISH,
    RuleId,
    SystemMode,
    arity,
    discharge_scope,
    rules_of,
)
from syntax.errors import FitError, IllFormed
from syntax.formulas import (
    VARIABLE_LABELS,
    AllNbhd,
    AllWorlds,
    And,
    Believer,
    BotN,
    BotW,
    Context,
    Formula,
    Imp,
    LabelKind,
    NbhdVar,
    Or,
    SomeNbhd,
    SomeWorld,
    Testimonial,
    Variable,
    WorldVar,
    append_labels,
    as_implication,
    bottom,
    characteristic,
    flatten,
    has_existential,
    has_universal,
    is_sentence,
    same_implication,
    split_last,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckError:
    path: Path
    node_id: Optional[str]
    rule: RuleId
    message: str

    def __str__(self) -> str:
        where = self.node_id or format_path(self.path)
        return f"{where} ({self.rule.value}): {self.message}"


@dataclass
class CheckReport:
    errors: List[CheckError] = field(default_factory=list)
    open_hypotheses: FrozenSet[Judgement] = frozenset()
    conclusion: Optional[Judgement] = None

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class Assumption:
    """An open hypothesis (or a global premise) a premise depends on."""
    hyp_id: str
    judgement: Judgement
    is_global: bool = False


@dataclass(frozen=True)
class Application:
    """
    One rule application, seen from the node that concludes it.

    Structure:
        rule: the rule applied
        judgement: the conclusion
        premises: the premise judgements, in the rule's premise order
        discharged: per premise, the hypotheses closed here
        assumptions: per premise, the hypotheses that stay open below this node
        binds: the eigenvariable, for the binding rules
    """
    rule: RuleId
    judgement: Judgement
    premises: Tuple[Judgement, ...] = ()
    discharged: Tuple[Tuple[Assumption, ...], ...] = ()
    assumptions: Tuple[Tuple[Assumption, ...], ...] = ()
    binds: Optional[Variable] = None

    @classmethod
    def of(cls, n: DerivationNode) -> "Application":
        scope = discharge_scope(n.rule)
        discharged, assumptions = [], []
        for i, p in enumerate(n.premises):
            closed, kept = [], []
            for leaf in open_leaves(p):
                a = Assumption(leaf.hyp_id, leaf.judgement, leaf.rule is RuleId.PREMISE)
                if i in scope and leaf.rule is RuleId.HYP and leaf.hyp_id in n.discharges:
                    closed.append(a)
                else:
                    kept.append(a)
            discharged.append(tuple(closed))
            assumptions.append(tuple(kept))
        return cls(
            n.rule, n.judgement, tuple(p.judgement for p in n.premises),
            tuple(discharged), tuple(assumptions), n.binds,
        )

    def open_below(self) -> Iterator[Assumption]:
        for kept in self.assumptions:
            yield from kept


class RuleViolation(Exception):
    """Raised inside a schema check to report the first violated condition of a node."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise RuleViolation(message)


def _last(ctx: Context):
    _require(bool(ctx), "context is empty")
    return ctx[:-1], ctx[-1]


def _existential_free(ctx: Context) -> None:
    _require(not has_existential(ctx), "context must not contain an existential label")


def _universal_free(ctx: Context) -> None:
    _require(not has_universal(ctx), "context must not contain a universal label")


def _quantifier_free(ctx: Context) -> None:
    _universal_free(ctx)
    _existential_free(ctx)


def _local(ctx: Context) -> None:
    _require(
        ctx == () or (len(ctx) == 1 and isinstance(ctx[0], NbhdVar)),
        "context must be empty or a single neighbourhood variable",
    )


def pointed(j: Judgement) -> Iterator[Tuple[Context, Variable]]:
    """The variable labels of ``j``'s context, each with the labels before it."""
    for i, label in enumerate(j.ctx):
        if isinstance(label, VARIABLE_LABELS):
            yield j.ctx[:i], label


def context_violation(ctx: Context) -> Optional[str]:
    """Why ``ctx`` cannot carry its variable labels, or None."""
    for i, label in enumerate(ctx):
        if isinstance(label, VARIABLE_LABELS) and not all(isinstance(l, VARIABLE_LABELS) for l in ctx[:i]):
            return f"context variable {label.name} follows a quantifier label"
    return None


def anchoring_violation(a: Application) -> Optional[str]:
    """
    The first context variable a premise relies on that the conclusion loses sight of.

    A variable is anchored when it sits at the same place in the conclusion or in a hypothesis
    that stays open. A world variable that vanishes from view entirely may also be dropped, since
    it can be chosen again in any neighbourhood.
    """
    below = [a.judgement] + [h.judgement for h in a.open_below()]
    anchors = {occurrence for j in below for occurrence in pointed(j)}
    mentioned = frozenset().union(*(j.variables() for j in below))
    for premise, closed in zip(a.premises, a.discharged):
        for j in (premise,) + tuple(h.judgement for h in closed):
            for prefix, var in pointed(j):
                if var == a.binds or (prefix, var) in anchors:
                    continue
                if isinstance(var, WorldVar) and var not in mentioned:
                    continue
                return f"variable {var.name} is not anchored by the conclusion or an open hypothesis"
    return None


def _same(a: Judgement, b: Judgement, what: str) -> None:
    _require(a == b, f"{what} must be {b}, found {a}")


def _discharge_as(
    a: Application, index: int, expected: Judgement, same: Callable[[Judgement, Judgement], bool] = None
) -> None:
    same = same or (lambda x, y: x == y)
    for h in a.discharged[index]:
        _require(
            same(h.judgement, expected),
            f"discharged hypothesis {h.hyp_id} must be {expected}, found {h.judgement}",
        )


def _fresh(a: Application, var, major: Optional[int], minor: int) -> None:
    _require(var not in a.judgement.variables(), f"eigenvariable {var.name} occurs in the conclusion")
    for h in a.assumptions[minor]:
        _require(
            var not in h.judgement.variables(),
            f"eigenvariable {var.name} occurs in open hypothesis {h.hyp_id}",
        )
    if major is not None:
        _require(var not in a.premises[major].variables(), f"eigenvariable {var.name} occurs in the major premise")
        for h in a.assumptions[major] + a.discharged[major]:
            _require(
                var not in h.judgement.variables(),
                f"eigenvariable {var.name} occurs in open hypothesis {h.hyp_id}",
            )


def _leaf(a: Application) -> None:
    pass


def _premise(a: Application) -> None:
    _require(a.judgement.ctx == (), "premises are asserted at the empty context")
    _require(is_sentence(a.judgement.formula), "premise must be a sentence")


def _and_i(a: Application) -> None:
    f, ctx = a.judgement.formula, a.judgement.ctx
    _existential_free(ctx)
    _require(isinstance(f, And) and not f.index, "conclusion must be a conjunction")
    _same(a.premises[0], Judgement(f.left, ctx), "left premise")
    _same(a.premises[1], Judgement(f.right, ctx), "right premise")


def _and_e(left: bool) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        major = a.premises[0]
        f = major.formula
        _require(isinstance(f, And) and not f.index, "premise must be a conjunction")
        _same(a.judgement, Judgement(f.left if left else f.right, major.ctx), "conclusion")
    return check


def _or_i(left: bool) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        f, ctx = a.judgement.formula, a.judgement.ctx
        _require(isinstance(f, Or) and not f.index, "conclusion must be a disjunction")
        _same(a.premises[0], Judgement(f.left if left else f.right, ctx), "premise")
    return check


def _or_e(a: Application) -> None:
    major = a.premises[0]
    f = major.formula
    _require(isinstance(f, Or) and not f.index, "major premise must be a disjunction")
    _universal_free(major.ctx)
    _same(a.premises[1], a.judgement, "left case")
    _same(a.premises[2], a.judgement, "right case")
    _discharge_as(a, 1, Judgement(f.left, major.ctx))
    _discharge_as(a, 2, Judgement(f.right, major.ctx))


def _imp_i(a: Application) -> None:
    ctx = a.judgement.ctx
    _local(ctx)
    parts = as_implication(a.judgement.formula)
    _require(parts is not None, "conclusion must be an implication or a negation")
    antecedent, consequent = parts
    _same(a.premises[0], Judgement(consequent, ctx), "premise")
    _discharge_as(a, 0, Judgement(antecedent, ctx))


def _imp_e(a: Application) -> None:
    ctx = a.judgement.ctx
    _existential_free(ctx)
    major, minor = a.premises
    parts = as_implication(major.formula)
    _require(parts is not None, "major premise must be an implication or a negation")
    antecedent, consequent = parts
    _require(major.ctx == ctx, "major premise context differs from the conclusion's")
    _same(minor, Judgement(antecedent, ctx), "minor premise")
    _same(a.judgement, Judgement(consequent, ctx), "conclusion")


def _bot_e(kind) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        _same(a.premises[0], Judgement(kind(), a.judgement.ctx), "premise")
    return check


def _bot_transfer(a: Application) -> None:
    above = a.premises[0]
    rest, label = _last(above.ctx)
    _require(
        isinstance(label, (WorldVar, NbhdVar, SomeWorld, SomeNbhd)),
        "premise context must end with a variable or an existential label",
    )
    _require(rest == a.judgement.ctx, "conclusion context must drop the last premise label")
    if label.kind is LabelKind.NBHD:
        _require(above.formula == BotW() and a.judgement.formula == BotN(), "expects botW above and botN below")
    else:
        _require(above.formula == BotN() and a.judgement.formula == BotW(), "expects botN above and botW below")


def _l2c(a: Application) -> None:
    above = a.premises[0]
    _require(bool(above.formula.index), "premise formula has an empty index")
    rest, label = split_last(above.formula)
    _same(a.judgement, Judgement(rest, above.ctx + (label,)), "conclusion")


def _c2l(a: Application) -> None:
    above = a.premises[0]
    ctx, label = _last(above.ctx)
    _same(a.judgement, Judgement(append_labels(above.formula, label), ctx), "conclusion")


def _intro_binding(quantifier, var_type) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        ctx, label = _last(a.judgement.ctx)
        _require(label == quantifier, f"conclusion context must end with {type(quantifier).__name__}")
        var = a.binds
        _require(isinstance(var, var_type), f"must bind a {var_type.__name__}")
        _same(a.premises[0], Judgement(a.judgement.formula, ctx + (var,)), "premise")
        _fresh(a, var, None, 0)
    return check


def _elim_universal(quantifier, targets) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        above = a.premises[0]
        ctx, label = _last(above.ctx)
        _require(label == quantifier, f"premise context must end with {type(quantifier).__name__}")
        _, target = _last(a.judgement.ctx)
        _require(isinstance(target, targets), "conclusion context ends with a label this rule cannot reach")
        _same(a.judgement, Judgement(above.formula, ctx + (target,)), "conclusion")
    return check


def _intro_existential(quantifier, var_type) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        above = a.premises[0]
        ctx, label = _last(above.ctx)
        _require(isinstance(label, var_type), f"premise context must end with a {var_type.__name__}")
        _same(a.judgement, Judgement(above.formula, ctx + (quantifier,)), "conclusion")
    return check


def _elim_existential(quantifier, var_type) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        major = a.premises[0]
        ctx, label = _last(major.ctx)
        _require(label == quantifier, f"major premise context must end with {type(quantifier).__name__}")
        _quantifier_free(ctx)
        var = a.binds
        _require(isinstance(var, var_type), f"must bind a {var_type.__name__}")
        _same(a.premises[1], a.judgement, "minor premise")
        _discharge_as(a, 1, Judgement(major.formula, ctx + (var,)))
        _fresh(a, var, 0, 1)
    return check


def _lift(a: Application) -> None:
    above = a.premises[0]
    _require(above.ctx == (), "lifted premise must be at the empty context")
    _require(a.judgement.formula == above.formula, "lifting keeps the formula")
    _existential_free(a.judgement.ctx)
    for h in a.assumptions[0]:
        _require(h.is_global, f"lifted derivation depends on hypothesis {h.hyp_id}")


def _split_cases(a: Application) -> None:
    _same(a.premises[0], a.judgement, "first case")
    _same(a.premises[1], a.judgement, "second case")


def _first_discharged(a: Application) -> Optional[Tuple[Assumption, bool]]:
    if a.discharged[0]:
        return a.discharged[0][0], False
    if a.discharged[1]:
        return a.discharged[1][0], True
    return None


def _strip(f: Formula, label) -> Formula:
    _require(bool(f.index) and f.index[-1] == label, "hypothesis formula has the wrong last label")
    return split_last(f)[0]


def _rule_31(a: Application) -> None:
    _split_cases(a)
    found = _first_discharged(a)
    if found is None:
        return
    h, swapped = found
    ctx, label = _last(h.judgement.ctx)
    _require(label == AllNbhd(), "hypotheses of rule 31 sit under a universal neighbourhood label")
    f = h.judgement.formula
    _require(isinstance(f, Imp) and not f.index, "hypotheses of rule 31 are implications")
    alpha, beta = _strip(f.left, SomeWorld()), _strip(f.right, SomeWorld())
    if swapped:
        alpha, beta = beta, alpha
    _quantifier_free(ctx)
    first, second = append_labels(alpha, SomeWorld()), append_labels(beta, SomeWorld())
    _discharge_as(a, 0, Judgement(Imp(first, second), ctx + (AllNbhd(),)))
    _discharge_as(a, 1, Judgement(Imp(second, first), ctx + (AllNbhd(),)))


def _axiom(label_type, quantifier, pointed_context: bool) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        ctx, label = _last(a.judgement.ctx)
        _require(isinstance(label, label_type), f"context must end with a {label_type.__name__} label")
        if pointed_context:
            _quantifier_free(ctx)
        else:
            _existential_free(ctx)
        _require(
            a.judgement.formula == append_labels(label.formula, quantifier),
            "conclusion must be the label's formula under the matching world quantifier",
        )
    return check


def _hereditary_intro(label_type, quantifier) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        above = a.premises[0]
        ctx, label = _last(above.ctx)
        _require(isinstance(label, label_type), f"premise context must end with a {label_type.__name__} label")
        condition = append_labels(label.formula, quantifier)
        _same(a.judgement, Judgement(Imp(condition, above.formula), ctx + (AllNbhd(),)), "conclusion")
    return check


def _hereditary_elim(label_type, quantifier) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        above = a.premises[0]
        ctx, label = _last(above.ctx)
        _require(label == AllNbhd(), "premise context must end with the universal neighbourhood label")
        f = above.formula
        _require(isinstance(f, Imp) and not f.index, "premise must be an implication")
        payload = _strip(f.left, quantifier)
        _same(a.judgement, Judgement(f.right, ctx + (label_type(payload),)), "conclusion")
    return check


def _hereditary_split(label_type, quantifier) -> Callable[[Application], None]:
    def check(a: Application) -> None:
        _split_cases(a)
        found = _first_discharged(a)
        if found is None:
            return
        h, swapped = found
        ctx, label = _last(h.judgement.ctx)
        _require(isinstance(label, label_type), f"hypotheses sit under a {label_type.__name__} label")
        alpha = _strip(h.judgement.formula, quantifier)
        beta = label.formula
        if swapped:
            alpha, beta = beta, alpha
        _quantifier_free(ctx)
        _discharge_as(a, 0, Judgement(append_labels(alpha, quantifier), ctx + (label_type(beta),)))
        _discharge_as(a, 1, Judgement(append_labels(beta, quantifier), ctx + (label_type(alpha),)))
    return check


def _class_abs(a: Application) -> None:
    f, ctx = a.judgement.formula, a.judgement.ctx
    _local(ctx)
    falsum = bottom(characteristic(f))
    _same(a.premises[0], Judgement(falsum, ctx), "premise")
    _discharge_as(
        a, 0, Judgement(Imp(f, falsum), ctx),
        lambda x, y: x.ctx == y.ctx and same_implication(x.formula, y.formula),
    )


SCHEMAS: Dict[RuleId, Callable[[Application], None]] = {
    RuleId.HYP: _leaf,
    RuleId.PREMISE: _premise,
    RuleId.AND_I: _and_i,
    RuleId.AND_E_L: _and_e(left=True),
    RuleId.AND_E_R: _and_e(left=False),
    RuleId.OR_I_L: _or_i(left=True),
    RuleId.OR_I_R: _or_i(left=False),
    RuleId.OR_E: _or_e,
    RuleId.IMP_I: _imp_i,
    RuleId.IMP_E: _imp_e,
    RuleId.BOT_N_E: _bot_e(BotN),
    RuleId.BOT_W_E: _bot_e(BotW),
    RuleId.BOT_TRANSFER: _bot_transfer,
    RuleId.L2C: _l2c,
    RuleId.C2L: _c2l,
    RuleId.ALL_W_I: _intro_binding(AllWorlds(), WorldVar),
    RuleId.ALL_W_E: _elim_universal(AllWorlds(), (WorldVar, SomeWorld)),
    RuleId.SOME_W_I: _intro_existential(SomeWorld(), WorldVar),
    RuleId.SOME_W_E: _elim_existential(SomeWorld(), WorldVar),
    RuleId.ALL_N_I: _intro_binding(AllNbhd(), NbhdVar),
    RuleId.ALL_N_E: _elim_universal(AllNbhd(), (NbhdVar,)),
    RuleId.SOME_N_I: _intro_existential(SomeNbhd(), NbhdVar),
    RuleId.SOME_N_E: _elim_existential(SomeNbhd(), NbhdVar),
    RuleId.LIFT: _lift,
    RuleId.RULE_31: _rule_31,
    RuleId.T_AXIOM: _axiom(Testimonial, SomeWorld(), pointed_context=True),
    RuleId.T_I: _hereditary_intro(Testimonial, SomeWorld()),
    RuleId.T_E: _hereditary_elim(Testimonial, SomeWorld()),
    RuleId.T_SPLIT: _hereditary_split(Testimonial, SomeWorld()),
    RuleId.B_AXIOM: _axiom(Believer, AllWorlds(), pointed_context=False),
    RuleId.B_I: _hereditary_intro(Believer, AllWorlds()),
    RuleId.B_E: _hereditary_elim(Believer, AllWorlds()),
    RuleId.B_SPLIT: _hereditary_split(Believer, AllWorlds()),
    RuleId.CLASS_ABS: _class_abs,
}


def _has_universal_nbhd(ctx: Context) -> bool:
    return any(isinstance(label, (AllNbhd, Testimonial, Believer)) for label in ctx)


def _fit_violation(j: Judgement) -> Optional[str]:
    try:
        flatten(j.formula, j.ctx)
    except (FitError, IllFormed) as e:
        return str(e)
    return None


def check_application(a: Application, mode: SystemMode) -> Optional[str]:
    """
    The first condition ``a`` violates as an instance of its rule in ``mode``, or None.

    Premise judgements are only required to fit; their own side conditions belong to the
    applications that conclude them.
    """
    if a.rule not in rules_of(mode):
        return "rule not in system"
    problem = _fit_violation(a.judgement)
    if problem is not None:
        return f"judgement {a.judgement} does not fit: {problem}"
    expected = arity(a.rule)
    if len(a.premises) != expected:
        return f"expects {expected} premises, found {len(a.premises)}"
    if a.binds is not None and a.rule not in BINDERS:
        return "rule binds no variable"
    if a.rule in NEGATIVEISH and mode in (SystemMode.IPUCV, SystemMode.IPUCV31):
        if _has_universal_nbhd(a.judgement.ctx):
            return "context must not contain a universal neighbourhood label"
    problem = context_violation(a.judgement.ctx)
    if problem is not None:
        return problem
    if any(_fit_violation(p) is not None for p in a.premises):
        return "a premise judgement does not fit"
    try:
        SCHEMAS[a.rule](a)
    except RuleViolation as e:
        return str(e)
    except IllFormed as e:
        return f"ill-formed instance: {e}"
    return anchoring_violation(a)


def check_node(n: DerivationNode, mode: SystemMode) -> Optional[str]:
    """The first condition ``n`` violates as an instance of its rule, or None."""
    if n.discharges and not discharge_scope(n.rule):
        return "rule discharges no hypotheses"
    if n.hyp_id is not None and not n.is_leaf_hypothesis:
        return "only hypotheses carry an id"
    if n.is_leaf_hypothesis and n.hyp_id is None:
        return f"{'hypothesis' if n.rule is RuleId.HYP else 'premise'} without an id"
    message = check_application(Application.of(n), mode)
    if message is not None:
        return message
    closable = {
        leaf.hyp_id
        for index in discharge_scope(n.rule)
        for leaf in open_leaves(n.premises[index])
        if leaf.rule is RuleId.HYP
    }
    missing = [h for h in n.discharges if h not in closable]
    if missing:
        return f"discharges unknown hypothesis {missing[0]}"
    return None


def check(d: DerivationNode, mode: SystemMode) -> CheckReport:
    """
    Check every node of ``d`` against its rule in ``mode``.

    Args:
        d: The derivation.
        mode: The system whose rules are admitted.

    Returns:
        A report whose errors are empty iff ``d`` is a derivation of its conclusion from its
        open hypotheses in ``mode``.
    """
    report = CheckReport(conclusion=d.judgement)
    for path, n in iter_nodes(d):
        message = check_node(n, mode)
        if message is not None:
            logger.debug("node %s rejected: %s", format_path(path), message)
            report.errors.append(CheckError(path, n.node_id, n.rule, message))

    for hyp_id, leaves in sorted(leaves_by_id(d).items()):
        first = leaves[0]
        for other in leaves[1:]:
            if other.judgement != first.judgement or other.rule is not first.rule:
                report.errors.append(CheckError(
                    (), first.node_id, first.rule, f"hypothesis id {hyp_id} used for different judgements",
                ))
                break

    open_ids = {leaf.hyp_id for leaf in open_leaves(d)}
    discharged = {h for _, n in iter_nodes(d) for h in n.discharges}
    for hyp_id in sorted(open_ids & discharged):
        report.errors.append(CheckError(
            (), d.node_id, d.rule, f"hypothesis {hyp_id} is discharged but also used outside the discharge",
        ))

    report.open_hypotheses = open_hypotheses(d)
    logger.debug("checked %d nodes, %d errors", d.size(), len(report.errors))
    return report
