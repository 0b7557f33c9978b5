import random
from typing import List, Sequence

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
    Label,
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
)


class FormulaGenerator:
    """
    Deterministic random well-formed formulas.

    The same seed always yields the same sequence, so generated corpora can be used as
    golden inputs. By default only sentences are produced; pass variable names to also get
    variable labels and neighbourhood atoms.

    Args:
        atoms: Atom names to draw from.
        seed: Seed of the private ``random.Random`` instance.
        world_vars: World variable names, empty for sentences only.
        nbhd_vars: Neighbourhood variable names, empty for sentences only.
        hereditary_labels: Whether testimonial/believer labels may appear.
    """
    def __init__(
        self,
        atoms: Sequence[str] = ("p", "q"),
        seed: int = 0,
        world_vars: Sequence[str] = (),
        nbhd_vars: Sequence[str] = (),
        hereditary_labels: bool = True,
    ) -> None:
        self.atoms = tuple(atoms)
        self.world_vars = tuple(world_vars)
        self.nbhd_vars = tuple(nbhd_vars)
        self.hereditary_labels = hereditary_labels
        self._rng = random.Random(seed)

    def formula(self, characteristic: Characteristic, depth: int) -> Formula:
        if characteristic is Characteristic.FN:
            return self._fn(depth)
        return self._fw(depth)

    def formulas(self, characteristic: Characteristic, depth: int, count: int) -> List[Formula]:
        return [self.formula(characteristic, self._rng.randint(0, depth)) for _ in range(count)]

    def _atom(self) -> Formula:
        return Atom(self._rng.choice(self.atoms))

    def _fn(self, depth: int) -> Formula:
        if depth <= 0:
            return self._atom() if self._rng.random() < 0.92 else BotN()
        choice = self._rng.randrange(8)
        if choice == 0:
            return Not(self._fn(depth - 1))
        if choice == 1:
            return And(self._fn(depth - 1), self._fn(depth - 1))
        if choice == 2:
            return Or(self._fn(depth - 1), self._fn(depth - 1))
        if choice == 3:
            return Imp(self._fn(depth - 1), self._fn(depth - 1))
        if choice == 4:
            return self._atom()
        return append_labels(self._fw(depth - 1), self.nbhd_label(depth))

    def _fw(self, depth: int) -> Formula:
        if depth <= 0:
            roll = self._rng.random()
            if roll < 0.04:
                return BotW()
            if self.nbhd_vars and roll < 0.14:
                var = self._rng.choice(self.nbhd_vars)
                return NbhdLeq(var) if self._rng.random() < 0.5 else NbhdGeq(var)
            return append_labels(self._atom(), self.world_label())
        choice = self._rng.randrange(7)
        if choice == 0:
            return Not(self._fw(depth - 1))
        if choice == 1:
            return And(self._fw(depth - 1), self._fw(depth - 1))
        if choice == 2:
            return Or(self._fw(depth - 1), self._fw(depth - 1))
        if choice == 3:
            return Imp(self._fw(depth - 1), self._fw(depth - 1))
        return append_labels(self._fn(depth - 1), self.world_label())

    def world_label(self, existential: bool = True) -> Label:
        options: List[Label] = [AllWorlds()]
        if existential:
            options.append(SomeWorld())
        options.extend(WorldVar(name) for name in self.world_vars)
        return self._rng.choice(options)

    def nbhd_label(self, depth: int = 1, existential: bool = True) -> Label:
        options: List[Label] = [AllNbhd()]
        if existential:
            options.append(SomeNbhd())
        options.extend(NbhdVar(name) for name in self.nbhd_vars)
        if self.hereditary_labels and self._rng.random() < 0.2:
            payload = self._fn(max(0, depth - 2))
            return Testimonial(payload) if self._rng.random() < 0.5 else Believer(payload)
        return self._rng.choice(options)

    def context(self, length: int, existential: bool = True) -> Context:
        """An alternating context of ``length`` labels, neighbourhood label first."""
        labels: List[Label] = []
        for position in range(length):
            if position % 2 == 0:
                labels.append(self.nbhd_label(existential=existential))
            else:
                labels.append(self.world_label(existential=existential))
        return tuple(labels)

    def implication(self, characteristic: Characteristic, depth: int) -> Formula:
        return Imp(self.formula(characteristic, depth), self.formula(characteristic, depth))
