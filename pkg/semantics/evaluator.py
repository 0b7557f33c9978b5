import logging
from typing import Dict, FrozenSet, Optional, Tuple

from semantics.models import Assignment, EvalPoint, FiniteModel, Neighbourhood
from syntax.errors import CharacteristicMismatch, UnboundVariable, UnknownPoint
from syntax.formulas import (
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
    flatten,
    free_variables,
    split_last,
)

logger = logging.getLogger(__name__)


class Evaluator:
    """
    Satisfaction of labeled formulas at the points of one model under one assignment.

    Results are memoized per (point, formula), so one evaluator can be reused across many
    formulas over the same model. With ``classical=True`` accessibility is read as identity.

    Args:
        model: A model that passes ``validate_model``.
        assignment: Values of world and neighbourhood variables.
        classical: Evaluate negation and implication classically.
    """
    def __init__(
        self,
        model: FiniteModel,
        assignment: Optional[Assignment] = None,
        classical: bool = False,
    ) -> None:
        self.model = model
        self.assignment = assignment or Assignment()
        self.classical = classical
        self._cache: Dict[Tuple[EvalPoint, Formula], bool] = {}

    def access(self, world: str) -> Tuple[str, ...]:
        if self.classical:
            return (world,)
        return self.model.successors[world]

    def holds(self, point: EvalPoint, f: Formula) -> bool:
        key = (point, f)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._holds(point, f)
            self._cache[key] = cached
        return cached

    def check_point(self, point: EvalPoint, f: Formula) -> None:
        expected = Characteristic.FW if point.is_template else Characteristic.FN
        actual = characteristic(f)
        if actual is not expected:
            kind = "template" if point.is_template else "model point"
            raise CharacteristicMismatch(f"{actual.value} formula evaluated at a {kind}")

    def _world_value(self, name: str) -> str:
        try:
            return self.assignment.world_vars[name]
        except KeyError:
            raise UnboundVariable(f"world variable {name} is not assigned") from None

    def _nbhd_value(self, name: str) -> Neighbourhood:
        try:
            return self.assignment.nbhd_vars[name]
        except KeyError:
            raise UnboundVariable(f"neighbourhood variable {name} is not assigned") from None

    def _holds(self, point: EvalPoint, f: Formula) -> bool:
        if f.index:
            rest, label = split_last(f)
            if point.is_template:
                return self._peel_world_label(point, rest, label)
            return self._peel_nbhd_label(point, rest, label)
        return self._holds_body(point, f)

    def _peel_nbhd_label(self, point: EvalPoint, rest: Formula, label) -> bool:
        if label.kind is not LabelKind.NBHD:
            raise CharacteristicMismatch("world label peeled at a model point")
        world = point.world
        system = self.model.sphere_system(world)
        if isinstance(label, AllNbhd):
            return all(self.holds(EvalPoint(world, n), rest) for n in system)
        if isinstance(label, SomeNbhd):
            return any(self.holds(EvalPoint(world, n), rest) for n in system)
        if isinstance(label, NbhdVar):
            n = self._nbhd_value(label.name)
            return n in system and self.holds(EvalPoint(world, n), rest)
        if isinstance(label, (Testimonial, Believer)):
            quantifier = SomeWorld() if isinstance(label, Testimonial) else AllWorlds()
            condition = append_labels(label.formula, quantifier)
            for successor in self.access(world):
                for n in self.model.sphere_system(successor):
                    here = EvalPoint(successor, n)
                    if self.holds(here, condition) and not self.holds(here, rest):
                        return False
            return True
        raise CharacteristicMismatch(f"unknown neighbourhood label {label!r}")

    def _peel_world_label(self, point: EvalPoint, rest: Formula, label) -> bool:
        if label.kind is not LabelKind.WORLD:
            raise CharacteristicMismatch("neighbourhood label peeled at a template")
        members = point.selected
        if isinstance(label, AllWorlds):
            return all(self.holds(EvalPoint(w), rest) for w in members)
        if isinstance(label, SomeWorld):
            return any(self.holds(EvalPoint(w), rest) for w in members)
        if isinstance(label, WorldVar):
            w = self._world_value(label.name)
            return w in members and self.holds(EvalPoint(w), rest)
        raise CharacteristicMismatch(f"unknown world label {label!r}")

    def _holds_body(self, point: EvalPoint, f: Formula) -> bool:
        if isinstance(f, Atom):
            if point.is_template:
                raise CharacteristicMismatch(f"atom {f.name} evaluated at a template")
            return point.world in self.model.true_at(f.name)
        if isinstance(f, (BotN, BotW)):
            return False
        if isinstance(f, (NbhdLeq, NbhdGeq)):
            if not point.is_template:
                raise CharacteristicMismatch("neighbourhood atom evaluated at a model point")
            other = self._nbhd_value(f.var)
            if isinstance(f, NbhdLeq):
                return other <= point.selected
            return point.selected <= other
        if isinstance(f, And):
            return self.holds(point, f.left) and self.holds(point, f.right)
        if isinstance(f, Or):
            return self.holds(point, f.left) or self.holds(point, f.right)
        if isinstance(f, Not):
            return not any(
                self.holds(EvalPoint(w, point.selected), f.operand) for w in self.access(point.world)
            )
        if isinstance(f, Imp):
            for w in self.access(point.world):
                there = EvalPoint(w, point.selected)
                if self.holds(there, f.left) and not self.holds(there, f.right):
                    return False
            return True
        raise CharacteristicMismatch(f"not a formula: {f!r}")


def evaluate(
    m: FiniteModel,
    pt: EvalPoint,
    sigma: Optional[Assignment],
    f: Formula,
    classical: bool = False,
) -> bool:
    """
    Decide whether ``f`` holds at ``pt``.

    Raises:
        CharacteristicMismatch: If an Fn formula is asked at a template or vice versa.
        UnboundVariable: If ``f`` mentions a variable ``sigma`` does not bind.
        UnknownPoint: If ``pt`` is not a world of ``m``, or selects a neighbourhood outside
            that world's sphere system.
    """
    evaluator = Evaluator(m, sigma, classical=classical)
    _check_known(m, pt)
    _check_bound(evaluator.assignment, f)
    evaluator.check_point(pt, f)
    return evaluator.holds(pt, f)


def _check_known(m: FiniteModel, pt: EvalPoint) -> None:
    if pt.world not in m.worlds:
        raise UnknownPoint(f"unknown world {pt.world}")
    if pt.selected is not None and pt.selected not in m.sphere_system(pt.world):
        members = ",".join(sorted(pt.selected))
        raise UnknownPoint(f"{{{members}}} is not a neighbourhood of {pt.world}")


def _check_bound(sigma: Assignment, f: Formula) -> None:
    for v in sorted(free_variables(f), key=lambda v: v.name):
        if isinstance(v, WorldVar) and v.name not in sigma.world_vars:
            raise UnboundVariable(f"world variable {v.name} is not assigned")
        if isinstance(v, NbhdVar) and v.name not in sigma.nbhd_vars:
            raise UnboundVariable(f"neighbourhood variable {v.name} is not assigned")


def resolve(m: FiniteModel, sigma: Optional[Assignment], ctx: Context, f: Formula) -> bool:
    """Satisfaction of ``f`` under ``ctx`` at the distinguished world; raises FitError."""
    return evaluate(m, EvalPoint(m.actual), sigma, flatten(f, ctx))


def _hereditary_set(
    m: FiniteModel, world: str, sigma: Optional[Assignment], alpha: Formula, quantifier
) -> FrozenSet[Neighbourhood]:
    if characteristic(alpha) is not Characteristic.FN:
        raise CharacteristicMismatch("testimonial and believer sets need an Fn formula")
    evaluator = Evaluator(m, sigma)
    condition = append_labels(alpha, quantifier)
    return frozenset(
        n for n in m.sphere_system(world) if evaluator.holds(EvalPoint(world, n), condition)
    )


def testimonials(
    m: FiniteModel, world: str, sigma: Optional[Assignment], alpha: Formula
) -> FrozenSet[Neighbourhood]:
    """Neighbourhoods of ``world`` with some world satisfying ``alpha``."""
    return _hereditary_set(m, world, sigma, alpha, SomeWorld())


def believers(
    m: FiniteModel, world: str, sigma: Optional[Assignment], alpha: Formula
) -> FrozenSet[Neighbourhood]:
    """Neighbourhoods of ``world`` all of whose worlds satisfy ``alpha``."""
    return _hereditary_set(m, world, sigma, alpha, AllWorlds())


def satisfying_worlds(
    m: FiniteModel, f: Formula, sigma: Optional[Assignment] = None
) -> FrozenSet[str]:
    evaluator = Evaluator(m, sigma)
    evaluator.check_point(EvalPoint(m.actual), f)
    return frozenset(w for w in m.worlds if evaluator.holds(EvalPoint(w), f))
