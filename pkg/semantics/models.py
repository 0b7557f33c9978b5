import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

logger = logging.getLogger(__name__)

Neighbourhood = FrozenSet[str]

ATOM_HEREDITY = "atom heredity"
NESTING = "nesting"
REFLEXIVITY = "reflexivity"
TRANSITIVITY = "transitivity"
SPHERE_PRESERVATION = "sphere preservation"
UNKNOWN_WORLD = "unknown world"
EMPTY_NEIGHBOURHOOD = "empty neighbourhood"


@dataclass(frozen=True)
class FiniteModel:
    """
    A finite intuitionistic nested-neighbourhood model.

    Structure:
        worlds: world ids, in the order used for printing and enumeration
        actual: the distinguished world used by ``resolve``
        access: accessibility pairs (u, v), read "v is reachable from u"
        spheres: world -> neighbourhoods, innermost first; missing worlds have none
        valuation: atom -> worlds where it holds
    """
    worlds: Tuple[str, ...]
    actual: str
    access: FrozenSet[Tuple[str, str]]
    spheres: Mapping[str, Tuple[Neighbourhood, ...]] = field(default_factory=dict)
    valuation: Mapping[str, FrozenSet[str]] = field(default_factory=dict)

    @cached_property
    def successors(self) -> Dict[str, Tuple[str, ...]]:
        return {w: tuple(v for v in self.worlds if (w, v) in self.access) for w in self.worlds}

    def sphere_system(self, world: str) -> Tuple[Neighbourhood, ...]:
        return tuple(self.spheres.get(world, ()))

    def true_at(self, atom: str) -> FrozenSet[str]:
        return self.valuation.get(atom, frozenset())

    def with_actual(self, world: str) -> "FiniteModel":
        return replace(self, actual=world)

    def neighbourhoods(self) -> Tuple[Neighbourhood, ...]:
        """Every neighbourhood of every world, without repetition, in world order."""
        seen: List[Neighbourhood] = []
        for w in self.worlds:
            for n in self.sphere_system(w):
                if n not in seen:
                    seen.append(n)
        return tuple(seen)


@dataclass(frozen=True)
class EvalPoint:
    """A model point ``<χ>`` when ``selected`` is None, otherwise a template ``<χ, N>``."""
    world: str
    selected: Optional[Neighbourhood] = None

    @property
    def is_template(self) -> bool:
        return self.selected is not None


@dataclass(frozen=True)
class Assignment:
    world_vars: Mapping[str, str] = field(default_factory=dict)
    nbhd_vars: Mapping[str, Neighbourhood] = field(default_factory=dict)

    def bind_world(self, name: str, world: str) -> "Assignment":
        return Assignment({**self.world_vars, name: world}, self.nbhd_vars)

    def bind_nbhd(self, name: str, nbhd: Neighbourhood) -> "Assignment":
        return Assignment(self.world_vars, {**self.nbhd_vars, name: nbhd})


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: Tuple
    message: str


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> List[str]:
        return [v.kind for v in self.violations]

    def add(self, kind: str, witness: Tuple, message: str) -> None:
        self.violations.append(Violation(kind, witness, message))


def validate_model(m: FiniteModel) -> ValidationReport:
    """
    Check every structural law of a finite model.

    Args:
        m: The model to validate.

    Returns:
        A report with one entry per violated law and its witness; empty iff admissible.
    """
    report = ValidationReport()
    worlds = set(m.worlds)

    if m.actual not in worlds:
        report.add(UNKNOWN_WORLD, (m.actual,), f"actual world {m.actual} is not a world")
    for u, v in sorted(m.access):
        for w in (u, v):
            if w not in worlds:
                report.add(UNKNOWN_WORLD, (u, v), f"access pair ({u},{v}) names unknown world {w}")

    for w in m.worlds:
        if (w, w) not in m.access:
            report.add(REFLEXIVITY, (w,), f"{w} does not access itself")
    for u in m.worlds:
        for v in m.worlds:
            if (u, v) not in m.access:
                continue
            for x in m.worlds:
                if (v, x) in m.access and (u, x) not in m.access:
                    report.add(TRANSITIVITY, (u, v, x), f"{u} -> {v} -> {x} but not {u} -> {x}")

    for w in sorted(m.spheres):
        if w not in worlds:
            report.add(UNKNOWN_WORLD, (w,), f"spheres given for unknown world {w}")
        system = m.sphere_system(w)
        for i, n in enumerate(system):
            if not n:
                report.add(EMPTY_NEIGHBOURHOOD, (w, i), f"neighbourhood {i} of {w} is empty")
            outside = sorted(n - worlds)
            if outside:
                report.add(UNKNOWN_WORLD, (w, i), f"neighbourhood {i} of {w} contains {outside[0]}")
        for i in range(len(system)):
            for j in range(i + 1, len(system)):
                if not system[i] <= system[j]:
                    report.add(NESTING, (w, i, j), f"neighbourhood {i} of {w} is not inside neighbourhood {j}")

    for u, v in sorted(m.access):
        if u != v and m.sphere_system(u) != m.sphere_system(v):
            report.add(SPHERE_PRESERVATION, (u, v), f"{u} -> {v} but their sphere systems differ")

    for atom in sorted(m.valuation):
        holds = m.valuation[atom]
        for w in sorted(holds - worlds):
            report.add(UNKNOWN_WORLD, (atom, w), f"atom {atom} holds at unknown world {w}")
        for u, v in sorted(m.access):
            if u in holds and v not in holds:
                report.add(ATOM_HEREDITY, (atom, u, v), f"{atom} holds at {u} but not at {v}")

    if report.violations:
        logger.debug("model rejected: %s", report.kinds())
    return report
