"""
Semantic audit of the rule catalog.

Rule applications are generated from a small pool of contexts and sentences and kept only when
the checker's own schemas accept them, side hypotheses included. Each accepted application is
read as a step between sequents: if every premise sequent (side hypotheses plus the premise's
discharged hypotheses, entailing the premise) is valid in a model, the conclusion sequent (side
hypotheses entailing the conclusion) must be valid in that model as well.

A sequent is valid in a model when, at every world and under every assignment that makes the
context variables of its judgements name existing neighbourhoods and worlds, the hypotheses
imply the conclusion.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from decide.enumeration import DEFAULT_BOUNDS, ModelBounds, enumerate_models
from deduction.checker import Application, Assumption, check_application, context_violation
from deduction.derivation import Judgement
from deduction.rules import RuleId, SystemMode, rules_of
from semantics.evaluator import Evaluator
from semantics.models import Assignment, EvalPoint, FiniteModel
from syntax.errors import FitError, IllFormed
from syntax.formulas import (
    VARIABLE_LABELS,
    AllNbhd,
    AllWorlds,
    And,
    Atom,
    Believer,
    BotN,
    BotW,
    Characteristic,
    Context,
    Formula,
    Imp,
    LabelKind,
    NbhdVar,
    Not,
    Or,
    SomeNbhd,
    SomeWorld,
    Testimonial,
    Variable,
    WorldVar,
    append_labels,
    bottom,
    characteristic,
    flatten,
    fits,
    free_variables,
)
from syntax.generators import FormulaGenerator

logger = logging.getLogger(__name__)

CANARY = "IMPE-CANARY"

N, M, U = NbhdVar("N"), NbhdVar("M"), WorldVar("U")
# eigenvariables, kept out of the context pool
K, V = NbhdVar("K"), WorldVar("V")

SIDES = ("same", "folded", "closed", "empty")


@dataclass(frozen=True)
class InstancePool:
    """
    Material for rule instances.

    Structure:
        fn: sentences asserted at model positions
        fw: sentences asserted at template positions
        model_contexts: contexts that end at a model position
        template_contexts: contexts that end at a template position
    """
    fn: Tuple[Formula, ...]
    fw: Tuple[Formula, ...]
    model_contexts: Tuple[Context, ...] = ()
    template_contexts: Tuple[Context, ...] = ()

    @classmethod
    def build(cls, atoms: Sequence[str], size: int = 1, seed: int = 0) -> "InstancePool":
        generator = FormulaGenerator(atoms=atoms, seed=seed, hereditary_labels=False)
        first = Atom(atoms[0])
        fn = [first, Not(first)] + [Atom(a) for a in atoms[1:2]]
        fn += generator.formulas(Characteristic.FN, 1, size)
        fw = [append_labels(first, SomeWorld()), append_labels(first, AllWorlds()), BotW()]
        fw += generator.formulas(Characteristic.FW, 1, size)
        model_contexts = ((), (N, U), (AllNbhd(), AllWorlds()), (SomeNbhd(), SomeWorld()))
        template_contexts = ((N,), (AllNbhd(),), (SomeNbhd(),), (N, U, M), (Testimonial(first),), (Believer(first),))
        return cls(tuple(dict.fromkeys(fn)), tuple(dict.fromkeys(fw)), model_contexts, template_contexts)

    def formulas(self, ctx: Context) -> Tuple[Formula, ...]:
        return self.fw if _at_template(ctx) else self.fn

    def contexts(self) -> Tuple[Context, ...]:
        return self.model_contexts + self.template_contexts


def _at_template(ctx: Context) -> bool:
    return bool(ctx) and ctx[-1].kind is LabelKind.NBHD


@dataclass(frozen=True)
class Instance:
    """An accepted rule application with its side hypotheses and global premises."""
    application: Application
    side: Tuple[Judgement, ...] = ()
    globals: Tuple[Formula, ...] = ()

    def premise_sequents(self) -> Iterator[Tuple[Tuple[Judgement, ...], Judgement]]:
        a = self.application
        for premise, closed in zip(a.premises, a.discharged):
            yield self.side + tuple(h.judgement for h in closed), premise

    def describe(self) -> str:
        hyps = ", ".join(str(j) for j in self.side)
        return f"{hyps} |- {self.application.judgement}" if hyps else f"|- {self.application.judgement}"


@dataclass(frozen=True)
class Counterexample:
    rule: str
    model: FiniteModel
    point: EvalPoint
    assignment: Assignment
    instance: Instance

    def describe(self) -> str:
        text = self.instance.describe()
        bound = [f"w({k})={v}" for k, v in sorted(self.assignment.world_vars.items())]
        bound += [
            f"n({k})={{{','.join(sorted(v))}}}" for k, v in sorted(self.assignment.nbhd_vars.items())
        ]
        return f"{text} with {', '.join(bound)}" if bound else text


@dataclass
class RuleAudit:
    rule: str
    checked: int = 0
    counterexample: Optional[Counterexample] = None


@dataclass
class AuditReport:
    mode: SystemMode
    bounds: ModelBounds
    models: int = 0
    entries: List[RuleAudit] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.counterexample is None for e in self.entries if e.rule != CANARY)

    def failures(self) -> List[RuleAudit]:
        return [e for e in self.entries if e.counterexample is not None]

    def entry(self, rule: str) -> RuleAudit:
        return next(e for e in self.entries if e.rule == rule)


# (conclusion, premises, discharged per premise, eigenvariable)
Shape = Tuple[Judgement, Tuple[Judgement, ...], Tuple[Tuple[Judgement, ...], ...], Optional[Variable]]


def _shape(conclusion: Judgement, *premises: Judgement, discharged=None, binds=None) -> Shape:
    return conclusion, premises, discharged or tuple(() for _ in premises), binds


def _pairs(fs: Sequence[Formula]) -> Iterator[Tuple[Formula, Formula]]:
    return product(fs[:2], repeat=2)


def _goals(pool: InstancePool, ctx: Context) -> List[Tuple[Formula, Context]]:
    return list(dict.fromkeys([(pool.fn[0], ()), (pool.formulas(ctx)[0], ctx)]))


def _hyp_shapes(pool):
    for c in pool.contexts():
        for f in pool.formulas(c):
            yield _shape(Judgement(f, c))


def _premise_shapes(pool):
    for f in pool.fn:
        yield _shape(Judgement(f))


def _and_i_shapes(pool):
    for c in pool.contexts():
        for a, b in _pairs(pool.formulas(c)):
            yield _shape(Judgement(And(a, b), c), Judgement(a, c), Judgement(b, c))


def _and_e_shapes(left: bool):
    def shapes(pool):
        for c in pool.contexts():
            for a, b in _pairs(pool.formulas(c)):
                yield _shape(Judgement(a if left else b, c), Judgement(And(a, b), c))
    return shapes


def _or_i_shapes(left: bool):
    def shapes(pool):
        for c in pool.contexts():
            for a, b in _pairs(pool.formulas(c)):
                yield _shape(Judgement(Or(a, b), c), Judgement(a if left else b, c))
    return shapes


def _or_e_shapes(pool):
    for c in pool.contexts():
        for a, b in _pairs(pool.formulas(c)):
            for goal, where in _goals(pool, c):
                case = Judgement(goal, where)
                yield _shape(
                    case, Judgement(Or(a, b), c), case, case,
                    discharged=((), (Judgement(a, c),), (Judgement(b, c),)),
                )


def _imp_i_shapes(pool):
    for c in pool.contexts():
        for a, b in _pairs(pool.formulas(c)):
            yield _shape(Judgement(Imp(a, b), c), Judgement(b, c), discharged=((Judgement(a, c),),))


def _imp_e_shapes(pool):
    for c in pool.contexts():
        for a, b in _pairs(pool.formulas(c)):
            yield _shape(Judgement(b, c), Judgement(Imp(a, b), c), Judgement(a, c))


def _canary_shapes(pool):
    for c in pool.contexts():
        for a, b in _pairs(pool.formulas(c)):
            yield _shape(Judgement(a, c), Judgement(Imp(a, b), c), Judgement(b, c))


def _bot_e_shapes(kind):
    def shapes(pool):
        for c in pool.contexts():
            falsum = bottom(Characteristic.FW if _at_template(c) else Characteristic.FN)
            if not isinstance(falsum, kind):
                continue
            for f in pool.formulas(c):
                yield _shape(Judgement(f, c), Judgement(falsum, c))
    return shapes


def _bot_transfer_shapes(pool):
    for c in pool.contexts():
        if not c:
            continue
        if _at_template(c):
            yield _shape(Judgement(BotN(), c[:-1]), Judgement(BotW(), c))
        else:
            yield _shape(Judgement(BotW(), c[:-1]), Judgement(BotN(), c))


def _label_shapes(to_context: bool):
    def shapes(pool):
        for c in pool.contexts():
            if not c:
                continue
            for f in pool.formulas(c):
                unfolded = Judgement(f, c)
                folded = Judgement(append_labels(f, c[-1]), c[:-1])
                yield _shape(unfolded, folded) if to_context else _shape(folded, unfolded)
    return shapes


def _prefixes(pool, template: bool) -> Tuple[Context, ...]:
    """Contexts after which a label of the other kind may follow."""
    return pool.template_contexts if template else pool.model_contexts


def _quantifier_shapes(universal, existential, target, eigen, template: bool):
    """
    Introduction and elimination shapes of one quantifier pair.

    ``template`` tells whether the quantified label is a world label, which follows a template
    context and quantifies over model formulas.
    """
    def formulas(pool, c):
        return pool.fn if template else pool.fw

    def all_i(pool):
        for c in _prefixes(pool, template):
            for f in formulas(pool, c):
                yield _shape(Judgement(f, c + (universal,)), Judgement(f, c + (eigen,)), binds=eigen)

    def all_e(pool):
        targets = (target, existential) if template else (target, M)
        for c in _prefixes(pool, template):
            for f in formulas(pool, c):
                for t in targets:
                    yield _shape(Judgement(f, c + (t,)), Judgement(f, c + (universal,)))

    def some_i(pool):
        for c in _prefixes(pool, template):
            for f in formulas(pool, c):
                yield _shape(Judgement(f, c + (existential,)), Judgement(f, c + (target,)))

    def some_e(pool):
        for c in _prefixes(pool, template):
            for f in formulas(pool, c):
                for goal, where in _goals(pool, c + (target,)):
                    minor = Judgement(goal, where)
                    yield _shape(
                        minor, Judgement(f, c + (existential,)), minor,
                        discharged=((), (Judgement(f, c + (eigen,)),)), binds=eigen,
                    )

    return all_i, all_e, some_i, some_e


_ALL_W_I, _ALL_W_E, _SOME_W_I, _SOME_W_E = _quantifier_shapes(AllWorlds(), SomeWorld(), U, V, template=True)
_ALL_N_I, _ALL_N_E, _SOME_N_I, _SOME_N_E = _quantifier_shapes(AllNbhd(), SomeNbhd(), N, K, template=False)


def _lift_shapes(pool):
    for c in pool.model_contexts:
        for f in pool.fn:
            yield _shape(Judgement(f, c), Judgement(f))


def _guarded(a: Formula, b: Formula, quantifier) -> Formula:
    return Imp(append_labels(a, quantifier), append_labels(b, quantifier))


def _rule_31_shapes(pool):
    for c in pool.model_contexts:
        for a, b in _pairs(pool.fn):
            for goal, where in _goals(pool, c):
                case = Judgement(goal, where)
                yield _shape(
                    case, case, case,
                    discharged=(
                        (Judgement(_guarded(a, b, SomeWorld()), c + (AllNbhd(),)),),
                        (Judgement(_guarded(b, a, SomeWorld()), c + (AllNbhd(),)),),
                    ),
                )


def _hereditary_shapes(label_type, quantifier):
    def axiom(pool):
        for c in pool.model_contexts:
            for a in pool.fn:
                yield _shape(Judgement(append_labels(a, quantifier), c + (label_type(a),)))

    def intro(pool):
        for c in pool.model_contexts:
            for f, b in product(pool.fw, pool.fn):
                yield _shape(
                    Judgement(Imp(append_labels(b, quantifier), f), c + (AllNbhd(),)),
                    Judgement(f, c + (label_type(b),)),
                )

    def elim(pool):
        for c in pool.model_contexts:
            for f, b in product(pool.fw, pool.fn):
                yield _shape(
                    Judgement(f, c + (label_type(b),)),
                    Judgement(Imp(append_labels(b, quantifier), f), c + (AllNbhd(),)),
                )

    def split(pool):
        for c in pool.model_contexts:
            for a, b in _pairs(pool.fn):
                for goal, where in _goals(pool, c):
                    case = Judgement(goal, where)
                    yield _shape(
                        case, case, case,
                        discharged=(
                            (Judgement(append_labels(a, quantifier), c + (label_type(b),)),),
                            (Judgement(append_labels(b, quantifier), c + (label_type(a),)),),
                        ),
                    )

    return axiom, intro, elim, split


_T_AXIOM, _T_I, _T_E, _T_SPLIT = _hereditary_shapes(Testimonial, SomeWorld())
_B_AXIOM, _B_I, _B_E, _B_SPLIT = _hereditary_shapes(Believer, AllWorlds())


def _class_abs_shapes(pool):
    for c in pool.contexts():
        for f in pool.formulas(c):
            falsum = bottom(characteristic(f))
            yield _shape(Judgement(f, c), Judgement(falsum, c), discharged=((Judgement(Imp(f, falsum), c),),))


SHAPES = {
    RuleId.HYP.value: _hyp_shapes,
    RuleId.PREMISE.value: _premise_shapes,
    RuleId.AND_I.value: _and_i_shapes,
    RuleId.AND_E_L.value: _and_e_shapes(left=True),
    RuleId.AND_E_R.value: _and_e_shapes(left=False),
    RuleId.OR_I_L.value: _or_i_shapes(left=True),
    RuleId.OR_I_R.value: _or_i_shapes(left=False),
    RuleId.OR_E.value: _or_e_shapes,
    RuleId.IMP_I.value: _imp_i_shapes,
    RuleId.IMP_E.value: _imp_e_shapes,
    RuleId.BOT_N_E.value: _bot_e_shapes(BotN),
    RuleId.BOT_W_E.value: _bot_e_shapes(BotW),
    RuleId.BOT_TRANSFER.value: _bot_transfer_shapes,
    RuleId.L2C.value: _label_shapes(to_context=True),
    RuleId.C2L.value: _label_shapes(to_context=False),
    RuleId.ALL_W_I.value: _ALL_W_I,
    RuleId.ALL_W_E.value: _ALL_W_E,
    RuleId.SOME_W_I.value: _SOME_W_I,
    RuleId.SOME_W_E.value: _SOME_W_E,
    RuleId.ALL_N_I.value: _ALL_N_I,
    RuleId.ALL_N_E.value: _ALL_N_E,
    RuleId.SOME_N_I.value: _SOME_N_I,
    RuleId.SOME_N_E.value: _SOME_N_E,
    RuleId.LIFT.value: _lift_shapes,
    RuleId.RULE_31.value: _rule_31_shapes,
    RuleId.T_AXIOM.value: _T_AXIOM,
    RuleId.T_I.value: _T_I,
    RuleId.T_E.value: _T_E,
    RuleId.T_SPLIT.value: _T_SPLIT,
    RuleId.B_AXIOM.value: _B_AXIOM,
    RuleId.B_I.value: _B_I,
    RuleId.B_E.value: _B_E,
    RuleId.B_SPLIT.value: _B_SPLIT,
    RuleId.CLASS_ABS.value: _class_abs_shapes,
    CANARY: _canary_shapes,
}


def _fold(j: Judgement) -> Judgement:
    return Judgement(flatten(j.formula, j.ctx))


def _close(j: Judgement) -> Judgement:
    """``j`` folded, with every context variable it mentions only once made universal."""
    inside = free_variables(j.formula)
    ctx = tuple(
        (AllNbhd() if isinstance(label, NbhdVar) else AllWorlds())
        if isinstance(label, VARIABLE_LABELS) and label not in inside and j.ctx.count(label) == 1
        else label
        for label in j.ctx
    )
    return _fold(Judgement(j.formula, ctx))


def _conjoin(fs: Sequence[Formula]) -> Formula:
    result = fs[0]
    for f in fs[1:]:
        result = And(result, f)
    return result


def _represent(kind: str, premise: Judgement, closed: Tuple[Judgement, ...]) -> List[Judgement]:
    """Side hypotheses under which ``premise`` follows from its discharged hypotheses."""
    if kind == "same":
        return [premise]
    if kind == "closed":
        return [_close(premise)]
    if kind == "folded":
        if not closed:
            return [_fold(premise)]
        antecedent = _conjoin([_fold(h).formula for h in closed])
        return [Judgement(Imp(antecedent, _fold(premise).formula))]
    return []


def _sides(rule: str, shape: Shape) -> Iterator[Tuple[Tuple[Judgement, ...], Tuple[Formula, ...]]]:
    conclusion, premises, discharged, _ = shape
    if rule == RuleId.HYP.value:
        yield (conclusion,), ()
    elif rule == RuleId.PREMISE.value:
        yield (), (conclusion.formula,)
    elif rule == RuleId.LIFT.value:
        yield (), tuple(p.formula for p in premises)
    elif not premises:
        yield (), ()
    else:
        seen = set()
        for kind in SIDES:
            side = tuple(dict.fromkeys(
                h for premise, closed in zip(premises, discharged) for h in _represent(kind, premise, closed)
            ))
            if side not in seen:
                seen.add(side)
                yield side, ()


def _well_placed(j: Judgement) -> bool:
    return fits(j.formula, j.ctx) and context_violation(j.ctx) is None


def _application(rule: RuleId, shape: Shape, side, globals_) -> Application:
    conclusion, premises, discharged, binds = shape
    assumptions = tuple(Assumption(f"s{i}", j) for i, j in enumerate(side, 1))
    assumptions += tuple(Assumption(f"g{i}", Judgement(f), is_global=True) for i, f in enumerate(globals_, 1))
    closed = tuple(
        tuple(Assumption(f"d{i}{k}", j) for k, j in enumerate(hs, 1)) for i, hs in enumerate(discharged, 1)
    )
    kept = (assumptions,) + tuple(() for _ in premises[1:]) if premises else ()
    return Application(rule, conclusion, premises, closed, kept, binds)


def _accepted(name: str, shape: Shape, side, globals_, mode: SystemMode) -> Optional[Application]:
    conclusion, premises, discharged, binds = shape
    judgements = (conclusion,) + premises + tuple(j for hs in discharged for j in hs) + tuple(side)
    try:
        if not all(_well_placed(j) for j in judgements):
            return None
    except (FitError, IllFormed):
        return None
    if name == CANARY:
        # admitted wherever the ImpE it corrupts is
        a, b = premises[0].formula.left, premises[0].formula.right
        honest = (Judgement(b, conclusion.ctx), premises[0], Judgement(a, conclusion.ctx))
        if check_application(_application(RuleId.IMP_E, (honest[0], honest[1:], ((), ()), None), side, globals_), mode):
            return None
        return _application(RuleId.IMP_E, shape, side, globals_)
    a = _application(RuleId(name), shape, side, globals_)
    return None if check_application(a, mode) else a


def build_instances(mode: SystemMode, pool: InstancePool, canary: bool = False) -> Dict[str, List[Instance]]:
    """Every pool instance of every rule of ``mode`` that the checker accepts, per rule."""
    names = [rule.value for rule in RuleId if rule in rules_of(mode)]
    if canary:
        names.append(CANARY)
    instances: Dict[str, List[Instance]] = {}
    for name in names:
        found = []
        for shape in SHAPES[name](pool):
            try:
                sides = list(_sides(name, shape))
            except (FitError, IllFormed):
                continue
            for side, globals_ in sides:
                a = _accepted(name, shape, side, globals_, mode)
                if a is not None:
                    found.append(Instance(a, side, globals_))
        instances[name] = list(dict.fromkeys(found))
        logger.debug("rule %s: %d instances", name, len(instances[name]))
    return instances


@lru_cache(maxsize=None)
def _flat(j: Judgement) -> Formula:
    return flatten(j.formula, j.ctx)


def _variables(judgements: Sequence[Judgement]) -> Tuple[Variable, ...]:
    found = set()
    for j in judgements:
        found |= j.variables()
    return tuple(sorted(found, key=lambda v: (type(v).__name__, v.name)))


class _Evaluators:
    """One memoizing evaluator per assignment over a fixed model."""

    def __init__(self, m: FiniteModel, classical: bool) -> None:
        self.model = m
        self.classical = classical
        self._by_assignment: Dict[Tuple, Evaluator] = {}
        self.refuted: Dict[Tuple, Optional[Tuple[str, Tuple]]] = {}

    def assignments(self, variables: Tuple[Variable, ...]) -> List[Tuple]:
        domains = [
            self.model.worlds if isinstance(v, WorldVar) else self.model.neighbourhoods() for v in variables
        ]
        return [tuple(zip(variables, values)) for values in product(*domains)]

    def __call__(self, key: Tuple) -> Evaluator:
        ev = self._by_assignment.get(key)
        if ev is None:
            sigma = Assignment(
                {v.name: x for v, x in key if isinstance(v, WorldVar)},
                {v.name: x for v, x in key if isinstance(v, NbhdVar)},
            )
            ev = Evaluator(self.model, sigma, classical=self.classical)
            self._by_assignment[key] = ev
        return ev


def _admissible(m: FiniteModel, world: str, sigma: Assignment, j: Judgement) -> bool:
    """Whether the variables at the head of ``j``'s context name objects reachable from ``world``."""
    point = EvalPoint(world)
    for label in j.ctx:
        if isinstance(label, NbhdVar):
            n = sigma.nbhd_vars[label.name]
            if n not in m.sphere_system(point.world):
                return False
            point = EvalPoint(point.world, n)
        elif isinstance(label, WorldVar):
            w = sigma.world_vars[label.name]
            if w not in point.selected:
                return False
            point = EvalPoint(w)
        else:
            break
    return True


def _refute(evaluators: _Evaluators, hyps: Tuple[Judgement, ...], goal: Judgement) -> Optional[Tuple[str, Tuple]]:
    """First world and assignment where ``hyps`` hold and ``goal`` fails, or None."""
    if (hyps, goal) in evaluators.refuted:
        return evaluators.refuted[hyps, goal]
    m = evaluators.model
    judgements = hyps + (goal,)
    keys = evaluators.assignments(_variables(judgements))
    found = None
    for world, key in product(m.worlds, keys):
        ev = evaluators(key)
        if not all(_admissible(m, world, ev.assignment, j) for j in judgements):
            continue
        point = EvalPoint(world)
        if all(ev.holds(point, _flat(h)) for h in hyps) and not ev.holds(point, _flat(goal)):
            found = world, key
            break
    evaluators.refuted[hyps, goal] = found
    return found


def _premises_valid(evaluators: _Evaluators, instance: Instance) -> bool:
    m = evaluators.model
    plain = evaluators(())
    if not all(plain.holds(EvalPoint(w), f) for f in instance.globals for w in m.worlds):
        return False
    return all(_refute(evaluators, hyps, premise) is None for hyps, premise in instance.premise_sequents())


# rule -> (instances whose premises held, first (model position, instance index, world, assignment))
ChunkResult = Dict[str, Tuple[int, Optional[Tuple[int, int, str, Tuple]]]]


def _audit_chunk(args) -> ChunkResult:
    instances, models, classical = args
    result: ChunkResult = {name: (0, None) for name in instances}
    for position, m in enumerate(models):
        evaluators = _Evaluators(m, classical)
        for name, batch in instances.items():
            checked, hit = result[name]
            for index, instance in enumerate(batch):
                if not _premises_valid(evaluators, instance):
                    continue
                checked += 1
                if hit is None:
                    failure = _refute(evaluators, instance.side, instance.application.judgement)
                    if failure is not None:
                        hit = (position, index, *failure)
            result[name] = (checked, hit)
    return result


def _chunks(models: List[FiniteModel], workers: int) -> List[List[FiniteModel]]:
    if workers <= 1 or not models:
        return [models]
    size = max(1, -(-len(models) // (workers * 4)))
    return [models[i:i + size] for i in range(0, len(models), size)]


def audit_rules(
    mode: SystemMode,
    bounds: ModelBounds = DEFAULT_BOUNDS,
    workers: int = 1,
    canary: bool = False,
    classical: bool = False,
    pool: Optional[InstancePool] = None,
) -> AuditReport:
    """
    Check every rule of ``mode`` against every model within ``bounds``.

    Args:
        mode: The system whose rules are audited.
        bounds: Enumeration limits; ``classical`` narrows them to identity accessibility.
        workers: Worker processes; the report does not depend on it.
        canary: Also audit a deliberately unsound variant of ImpE.
        classical: Evaluate with identity accessibility.
        pool: Material for the rule instances; built from ``bounds.atoms`` when omitted.

    Returns:
        One entry per rule in catalog order (the canary last), each with the number of
        (instance, model) pairs whose premises held and the first counterexample found, if any.
    """
    if classical:
        bounds = replace(bounds, classical=True)
    pool = pool or InstancePool.build(bounds.atoms)
    instances = build_instances(mode, pool, canary)
    models = list(enumerate_models(bounds))
    logger.info(
        "auditing %d instances of %d rules over %d models",
        sum(len(batch) for batch in instances.values()), len(instances), len(models),
    )

    chunks = _chunks(models, workers)
    jobs = [(instances, chunk, classical) for chunk in chunks]
    if len(chunks) == 1:
        results = [_audit_chunk(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_audit_chunk, jobs))

    report = AuditReport(mode=mode, bounds=bounds, models=len(models))
    for name, batch in instances.items():
        entry = RuleAudit(name)
        for chunk, result in zip(chunks, results):
            checked, hit = result[name]
            entry.checked += checked
            if hit is not None and entry.counterexample is None:
                position, index, world, key = hit
                sigma = _Evaluators(chunk[position], classical)(key).assignment
                entry.counterexample = Counterexample(
                    name, chunk[position].with_actual(world), EvalPoint(world), sigma, batch[index],
                )
        if entry.counterexample is not None:
            logger.warning("rule %s has a counterexample", name)
        logger.debug("rule %s: %d instances checked", name, entry.checked)
        report.entries.append(entry)
    return report
