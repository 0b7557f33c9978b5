import logging
import random
from itertools import count
from typing import List, Optional, Tuple

from deduction.derivation import DerivationNode, hyp, node, premise
from deduction.rules import RuleId
from syntax.formulas import (
    AllNbhd,
    AllWorlds,
    And,
    BotN,
    BotW,
    Characteristic,
    Context,
    Formula,
    Imp,
    NbhdVar,
    Or,
    SomeNbhd,
    SomeWorld,
    WorldVar,
    append_labels,
    split_last,
)
from syntax.generators import FormulaGenerator

logger = logging.getLogger(__name__)


class DerivationGenerator:
    """
    Random valid derivations concluding at the empty context, rich in detours.

    Besides plain introductions the generator emits ∧, → and ∨ detours, and conjunction
    eliminations applied to the conclusion of a disjunction elimination, so normalizing its
    output exercises both detour and permutation reductions. Labeled pieces move formulas
    into contexts with variables and back through the quantifier, label, lift and transfer
    rules, with quantifier and label detours of their own. Open hypotheses and global
    premises are leaves named ``g1, g2, ..``; neighbourhood variables are ``M1, M2, ..`` and
    world variables ``U1, U2, ..``. Output is deterministic per seed.

    Args:
        seed: Seed of the private ``random.Random`` instance.
        atoms: Atom names for the formulas of hypotheses.
        max_nodes: Upper bound on the size of each derivation.
    """
    def __init__(self, seed: int = 0, atoms=("p", "q"), max_nodes: int = 40) -> None:
        self._rng = random.Random(seed)
        self._formulas = FormulaGenerator(atoms=atoms, seed=seed, hereditary_labels=False)
        self._ids = count(1)
        self.max_nodes = max_nodes

    def derivation(self) -> DerivationNode:
        d: Optional[DerivationNode] = None
        for depth in (3, 2, 1, 0):
            d = self._build(depth)
            if d.size() <= self.max_nodes:
                return d
        return d

    def derivations(self, n: int) -> List[DerivationNode]:
        return [self.derivation() for _ in range(n)]

    def _formula(self) -> Formula:
        return self._formulas.formula(Characteristic.FN, self._rng.randint(0, 1))

    def _hyp(self, formula: Optional[Formula] = None, ctx: Context = ()) -> DerivationNode:
        return hyp(f"g{next(self._ids)}", formula if formula is not None else self._formula(), ctx)

    def _nbhd_var(self) -> NbhdVar:
        return NbhdVar(f"M{next(self._ids)}")

    def _world_var(self) -> WorldVar:
        return WorldVar(f"U{next(self._ids)}")

    def _build(self, depth: int) -> DerivationNode:
        if depth <= 0:
            return self._hyp()
        builders = [
            self._and_intro,
            self._and_detour,
            self._imp_intro,
            self._imp_detour,
            self._or_detour,
            self._or_elim,
            self._permutation,
            self._nbhd_universal,
            self._world_universal,
            self._world_existential,
            self._nbhd_existential,
            self._transfer,
            self._lift,
        ]
        return self._rng.choice(builders)(depth - 1)

    def _and_intro(self, depth: int) -> DerivationNode:
        a, b = self._build(depth), self._build(depth)
        return node(RuleId.AND_I, And(a.judgement.formula, b.judgement.formula), (), a, b)

    def _and_detour(self, depth: int) -> DerivationNode:
        pair = self._and_intro(depth)
        f = pair.judgement.formula
        if self._rng.random() < 0.5:
            return node(RuleId.AND_E_L, f.left, (), pair)
        return node(RuleId.AND_E_R, f.right, (), pair)

    def _imp_intro(self, depth: int) -> DerivationNode:
        h = self._hyp()
        body = self._build(depth)
        a, b = h.judgement.formula, body.judgement.formula
        both = node(RuleId.AND_I, And(a, b), (), h, body)
        return node(RuleId.IMP_I, Imp(a, And(a, b)), (), both, discharges=(h.hyp_id,))

    def _imp_detour(self, depth: int) -> DerivationNode:
        minor = self._build(depth)
        a = minor.judgement.formula
        h = self._hyp(a)
        if self._rng.random() < 0.5:
            body = h
        else:
            other = self._build(depth)
            body = node(RuleId.AND_I, And(a, other.judgement.formula), (), h, other)
        b = body.judgement.formula
        intro = node(RuleId.IMP_I, Imp(a, b), (), body, discharges=(h.hyp_id,))
        return node(RuleId.IMP_E, b, (), intro, minor)

    def _swap_cases(self, a: Formula, b: Formula, major: DerivationNode) -> DerivationNode:
        """``b | a`` from a derivation of ``a | b``."""
        ha, hb = self._hyp(a), self._hyp(b)
        swapped = Or(b, a)
        left = node(RuleId.OR_I_R, swapped, (), ha)
        right = node(RuleId.OR_I_L, swapped, (), hb)
        return node(RuleId.OR_E, swapped, (), major, left, right, discharges=(ha.hyp_id, hb.hyp_id))

    def _or_detour(self, depth: int) -> DerivationNode:
        given = self._build(depth)
        g, other = given.judgement.formula, self._formula()
        if self._rng.random() < 0.5:
            a, b, rule = g, other, RuleId.OR_I_L
        else:
            a, b, rule = other, g, RuleId.OR_I_R
        intro = node(rule, Or(a, b), (), given)
        return self._swap_cases(a, b, intro)

    def _or_elim(self, depth: int) -> DerivationNode:
        a, b = self._formula(), self._formula()
        return self._swap_cases(a, b, self._hyp(Or(a, b)))

    def _permutation(self, depth: int) -> DerivationNode:
        a, b = self._formula(), self._formula()
        major = self._hyp(Or(a, b))
        shared = self._build(depth)
        c = shared.judgement.formula
        ha, hb = self._hyp(a), self._hyp(b)
        goal = And(c, Or(a, b))
        left = node(RuleId.AND_I, goal, (), shared, node(RuleId.OR_I_L, Or(a, b), (), ha))
        right = node(RuleId.AND_I, goal, (), shared, node(RuleId.OR_I_R, Or(a, b), (), hb))
        split = node(RuleId.OR_E, goal, (), major, left, right, discharges=(ha.hyp_id, hb.hyp_id))
        if self._rng.random() < 0.5:
            return node(RuleId.AND_E_L, c, (), split)
        return node(RuleId.AND_E_R, Or(a, b), (), split)

    def _local_detour(self, d: DerivationNode) -> DerivationNode:
        """A ∧ detour around ``d``, or a → detour where implications may be introduced."""
        f, ctx = d.judgement.formula, d.judgement.ctx
        local = len(ctx) <= 1 and all(isinstance(label, NbhdVar) for label in ctx)
        if local and self._rng.random() < 0.5:
            h = self._hyp(f, ctx)
            intro = node(RuleId.IMP_I, Imp(f, f), ctx, h, discharges=(h.hyp_id,))
            return node(RuleId.IMP_E, f, ctx, intro, d)
        pair = node(RuleId.AND_I, And(f, f), ctx, d, d)
        return node(RuleId.AND_E_L if self._rng.random() < 0.5 else RuleId.AND_E_R, f, ctx, pair)

    def _nbhd_universal(self, depth: int) -> DerivationNode:
        """``a^{+@}`` from itself, opened at a neighbourhood variable and closed again."""
        g = self._hyp(append_labels(self._formula(), SomeWorld(), AllNbhd()))
        m = self._nbhd_var()
        at_m = _relabel(RuleId.ALL_N_E, _l2c(g), m)
        if self._rng.random() < 0.5:
            k = self._nbhd_var()
            at_m = _relabel(RuleId.ALL_N_E, _relabel(RuleId.ALL_N_I, at_m, AllNbhd(), binds=m), k)
            m = k
        closed = _relabel(RuleId.ALL_N_I, self._local_detour(at_m), AllNbhd(), binds=m)
        if self._rng.random() < 0.3:
            closed = _l2c(_c2l(closed))
        return _c2l(closed)

    def _opened(self, g: DerivationNode) -> Tuple[DerivationNode, NbhdVar, WorldVar]:
        """``a`` at ``(M, U)`` from a hypothesis ``a^{*@}``."""
        m, u = self._nbhd_var(), self._world_var()
        at_m = _relabel(RuleId.ALL_N_E, _l2c(g), m)
        return _relabel(RuleId.ALL_W_E, _l2c(at_m), u), m, u

    def _world_universal(self, depth: int) -> DerivationNode:
        g = self._hyp(append_labels(self._formula(), AllWorlds(), AllNbhd()))
        at_u, m, u = self._opened(g)
        if self._rng.random() < 0.5:
            v = self._world_var()
            at_u = _relabel(RuleId.ALL_W_E, _relabel(RuleId.ALL_W_I, at_u, AllWorlds(), binds=u), v)
            u = v
        back = _c2l(_relabel(RuleId.ALL_W_I, self._local_detour(at_u), AllWorlds(), binds=u))
        return _c2l(_relabel(RuleId.ALL_N_I, back, AllNbhd(), binds=m))

    def _world_existential(self, depth: int) -> DerivationNode:
        """``a^{+@}`` from ``a^{*@}`` through a world witness and a ∃ detour."""
        g = self._hyp(append_labels(self._formula(), AllWorlds(), AllNbhd()))
        at_u, m, _ = self._opened(g)
        some = _relabel(RuleId.SOME_W_I, at_u, SomeWorld())
        v = self._world_var()
        h = self._hyp(at_u.judgement.formula, (m, v))
        minor = _relabel(RuleId.SOME_W_I, h, SomeWorld())
        elim = node(
            RuleId.SOME_W_E, minor.judgement.formula, minor.judgement.ctx, some, minor,
            discharges=(h.hyp_id,), binds=v,
        )
        return _c2l(_relabel(RuleId.ALL_N_I, _c2l(elim), AllNbhd(), binds=m))

    def _nbhd_existential(self, depth: int) -> DerivationNode:
        """``a^{+#}``, from a witness kept open at a free neighbourhood variable or from itself."""
        beta = append_labels(self._formula(), SomeWorld())
        if self._rng.random() < 0.5:
            major = _relabel(RuleId.SOME_N_I, self._hyp(beta, (self._nbhd_var(),)), SomeNbhd())
        else:
            major = _l2c(self._hyp(append_labels(beta, SomeNbhd())))
        k = self._nbhd_var()
        h = self._hyp(beta, (k,))
        minor = _relabel(RuleId.SOME_N_I, h, SomeNbhd())
        elim = node(
            RuleId.SOME_N_E, beta, (SomeNbhd(),), major, minor, discharges=(h.hyp_id,), binds=k,
        )
        return _c2l(elim)

    def _transfer(self, depth: int) -> DerivationNode:
        """Any formula from ``botW`` under an open neighbourhood variable."""
        w = self._hyp(BotW(), (self._nbhd_var(),))
        down = node(RuleId.BOT_TRANSFER, BotN(), (), w)
        return node(RuleId.BOT_N_E, self._formula(), (), down)

    def _lift(self, depth: int) -> DerivationNode:
        """``a^{*@}`` from the global premise ``a``."""
        a = self._formula()
        lifted = node(RuleId.LIFT, a, (AllNbhd(), AllWorlds()), premise(f"g{next(self._ids)}", a))
        return _c2l(_c2l(lifted))


def _l2c(d: DerivationNode) -> DerivationNode:
    rest, label = split_last(d.judgement.formula)
    return node(RuleId.L2C, rest, d.judgement.ctx + (label,), d)


def _c2l(d: DerivationNode) -> DerivationNode:
    ctx = d.judgement.ctx
    return node(RuleId.C2L, append_labels(d.judgement.formula, ctx[-1]), ctx[:-1], d)


def _relabel(rule: RuleId, d: DerivationNode, label, binds=None) -> DerivationNode:
    """``d``'s formula under ``d``'s context with its last label replaced by ``label``."""
    ctx = d.judgement.ctx[:-1] + (label,)
    return node(rule, d.judgement.formula, ctx, d, binds=binds)
