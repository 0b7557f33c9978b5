"""
Builders for the derivations behind the Lewis-style principles.

Each builder takes conditional formulas, encodes them and returns a derivation tree ready for
``check``. Hypothesis ids are fixed per builder so the printed derivations are stable.
"""
import logging
from typing import Optional

from deduction.derivation import DerivationNode, hyp, node, premise
from deduction.rules import RuleId
from lewis.vformulas import VFormula, VOr, encode
from syntax.formulas import (
    AllNbhd,
    AllWorlds,
    Believer,
    Formula,
    Imp,
    NbhdVar,
    Or,
    SomeWorld,
    Testimonial,
    WorldVar,
    append_labels,
    with_index,
)

logger = logging.getLogger(__name__)

EVERY = AllNbhd()


def _possibly(f: Formula) -> Formula:
    return append_labels(f, SomeWorld())


def _guarded(a: Formula, b: Formula) -> Formula:
    """``(a^{+} -> b^{+})^{@}``, the encoding of ``b =< a``."""
    return with_index(Imp(_possibly(a), _possibly(b)), (EVERY,))


def connex_formula(phi: VFormula, psi: VFormula) -> Formula:
    a, b = encode(phi), encode(psi)
    return Or(_guarded(a, b), _guarded(b, a))


def build_cpr(phi: VFormula, psi: VFormula) -> DerivationNode:
    """
    ``psi =< phi`` from the global premise ``phi -> psi``.

    Inside an arbitrary neighbourhood N, a witness of ``phi`` is a witness of ``psi``; the
    implication is then generalized over N.
    """
    a, b = encode(phi), encode(psi)
    n, u = NbhdVar("N"), WorldVar("U")
    a_some, b_some = _possibly(a), _possibly(b)

    witness = hyp("h1", a_some, (n,))
    unfolded = node(RuleId.L2C, a, (n, SomeWorld()), witness)
    instance = hyp("h2", a, (n, u))
    lifted = node(RuleId.LIFT, Imp(a, b), (n, u), premise("p1", Imp(a, b)))
    applied = node(RuleId.IMP_E, b, (n, u), lifted, instance)
    rewitnessed = node(RuleId.SOME_W_I, b, (n, SomeWorld()), applied)
    folded = node(RuleId.C2L, b_some, (n,), rewitnessed)
    eliminated = node(
        RuleId.SOME_W_E, b_some, (n,), unfolded, folded, discharges=("h2",), binds=u,
    )
    local = node(RuleId.IMP_I, Imp(a_some, b_some), (n,), eliminated, discharges=("h1",))
    general = node(RuleId.ALL_N_I, Imp(a_some, b_some), (EVERY,), local, binds=n)
    return node(RuleId.C2L, _guarded(a, b), (), general)


def build_connex(phi: VFormula, psi: VFormula) -> DerivationNode:
    """The connectedness disjunction, closed, by splitting on testimonials."""
    a, b = encode(phi), encode(psi)
    goal = connex_formula(phi, psi)

    first = hyp("t1", _possibly(a), (Testimonial(b),))
    by_first = node(RuleId.T_I, Imp(_possibly(b), _possibly(a)), (EVERY,), first)
    left = node(RuleId.OR_I_R, goal, (), node(RuleId.C2L, _guarded(b, a), (), by_first))

    second = hyp("t2", _possibly(b), (Testimonial(a),))
    by_second = node(RuleId.T_I, Imp(_possibly(a), _possibly(b)), (EVERY,), second)
    right = node(RuleId.OR_I_L, goal, (), node(RuleId.C2L, _guarded(a, b), (), by_second))

    return node(RuleId.T_SPLIT, goal, (), left, right, discharges=("t1", "t2"))


def build_connex_via31(phi: VFormula, psi: VFormula) -> DerivationNode:
    """The connectedness disjunction, closed, by a single application of rule 31."""
    a, b = encode(phi), encode(psi)
    goal = connex_formula(phi, psi)
    forward = hyp("r1", Imp(_possibly(a), _possibly(b)), (EVERY,))
    backward = hyp("r2", Imp(_possibly(b), _possibly(a)), (EVERY,))
    left = node(RuleId.OR_I_L, goal, (), node(RuleId.C2L, _guarded(a, b), (), forward))
    right = node(RuleId.OR_I_R, goal, (), node(RuleId.C2L, _guarded(b, a), (), backward))
    return node(RuleId.RULE_31, goal, (), left, right, discharges=("r1", "r2"))


def _weaken_case(
    case_id: str, inner_id: str, given: Formula, other: Formula, either: Formula, given_left: bool
) -> DerivationNode:
    """
    From ``other =< given`` read as ``(given^{+} -> other^{+})^{@}``, derive
    ``(given^{+} -> either^{+})^{@}`` where ``either`` joins both formulas.

    The implication is introduced inside an arbitrary neighbourhood N and generalized after.
    """
    n = NbhdVar("N")
    guard = hyp(case_id, _guarded(given, other))
    inside = node(RuleId.L2C, Imp(_possibly(given), _possibly(other)), (EVERY,), guard)
    instance = node(RuleId.ALL_N_E, Imp(_possibly(given), _possibly(other)), (n,), inside)
    witness = hyp(inner_id, _possibly(given), (n,))
    reached = node(RuleId.IMP_E, _possibly(other), (n,), instance, witness)
    opened = node(RuleId.L2C, other, (n, SomeWorld()), reached)
    joined = node(RuleId.OR_I_R if given_left else RuleId.OR_I_L, either, (n, SomeWorld()), opened)
    closed = node(RuleId.C2L, _possibly(either), (n,), joined)
    local = node(
        RuleId.IMP_I, Imp(_possibly(given), _possibly(either)), (n,), closed, discharges=(inner_id,),
    )
    general = node(RuleId.ALL_N_I, Imp(_possibly(given), _possibly(either)), (EVERY,), local, binds=n)
    return node(RuleId.C2L, _guarded(given, either), (), general)


def build_lewis_axiom(phi: VFormula, psi: VFormula) -> DerivationNode:
    """
    ``(phi | psi) =< phi | (phi | psi) =< psi`` by cases on the connectedness disjunction.

    The disjunction is the closed derivation of ``build_connex``; each case moves through the
    comparison it assumes.
    """
    a, b = encode(phi), encode(psi)
    either = encode(VOr(phi, psi))
    goal = Or(_guarded(a, either), _guarded(b, either))

    left = node(RuleId.OR_I_L, goal, (), _weaken_case("k1", "i1", a, b, either, given_left=True))
    right = node(RuleId.OR_I_R, goal, (), _weaken_case("k2", "i2", b, a, either, given_left=False))
    return node(RuleId.OR_E, goal, (), build_connex(phi, psi), left, right, discharges=("k1", "k2"))


def _stack(base: DerivationNode, label_type, quantifier, payload: Formula, depth: int) -> DerivationNode:
    intro_rule, elim_rule = (RuleId.T_I, RuleId.T_E) if label_type is Testimonial else (RuleId.B_I, RuleId.B_E)
    body = base.judgement.formula
    current = base
    for _ in range(depth):
        guarded = node(intro_rule, Imp(append_labels(payload, quantifier), body), (EVERY,), current)
        current = node(elim_rule, body, (label_type(payload),), guarded)
    return current


def build_t_detour(phi: VFormula, psi: Optional[VFormula] = None, depth: int = 1) -> DerivationNode:
    """
    ``depth`` stacked testimonial introduction/elimination pairs.

    With ``psi`` the stack starts from the hypothesis ``phi^{+}`` under ``T(psi)``; without it,
    from the testimonial axiom for ``phi``.
    """
    a = encode(phi)
    if psi is None:
        base = node(RuleId.T_AXIOM, _possibly(a), (Testimonial(a),))
        payload = a
    else:
        payload = encode(psi)
        base = hyp("d1", _possibly(a), (Testimonial(payload),))
    return _stack(base, Testimonial, SomeWorld(), payload, depth)


def build_b_detour(phi: VFormula, depth: int = 1) -> DerivationNode:
    """The believer counterpart of ``build_t_detour`` over the believer axiom."""
    a = encode(phi)
    base = node(RuleId.B_AXIOM, append_labels(a, AllWorlds()), (Believer(a),))
    return _stack(base, Believer, AllWorlds(), a, depth)
