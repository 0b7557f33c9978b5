"""
Bounded enumeration of finite models, one representative per isomorphism class.

Worlds are ``w0 .. w{n-1}``. Candidates are generated as (preorder, sphere systems,
valuation) over world indices; a candidate is kept only when its encoding is minimal among
all world permutations, which makes the output canonical and its order deterministic.
"""
import logging
from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, FrozenSet, Iterator, List, Sequence, Tuple

from semantics.models import FiniteModel

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]
Chain = Tuple[int, ...]
Encoding = Tuple


@dataclass(frozen=True)
class ModelBounds:
    """
    Limits of a model enumeration.

    Args:
        max_worlds: Largest number of worlds, at least 1.
        max_spheres: Longest sphere system.
        atoms: Atoms given a valuation.
        require_uniform_spheres: Every world gets the same sphere system.
        classical: Only the identity accessibility relation.
    """
    max_worlds: int = 3
    max_spheres: int = 2
    atoms: Tuple[str, ...] = ("p", "q")
    require_uniform_spheres: bool = True
    classical: bool = False

    def __post_init__(self) -> None:
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        if self.max_spheres < 0:
            raise ValueError("max_spheres must not be negative")

    def candidate_count(self) -> int:
        """Number of labelled candidates examined, before isomorphism rejection."""
        total = 0
        for n in range(1, self.max_worlds + 1):
            for order in preorders(n, self.classical):
                systems = sum(1 for _ in sphere_assignments(n, order, self))
                total += systems * len(up_sets(n, order)) ** len(self.atoms)
        return total


DEFAULT_BOUNDS = ModelBounds()


def world_names(n: int) -> Tuple[str, ...]:
    return tuple(f"w{i}" for i in range(n))


def preorders(n: int, classical: bool = False) -> List[FrozenSet[Pair]]:
    """Reflexive transitive relations on ``range(n)``, in a fixed order."""
    diagonal = frozenset((i, i) for i in range(n))
    if classical:
        return [diagonal]
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    found = []
    for mask in range(1 << len(off)):
        relation = set(diagonal)
        relation.update(pair for bit, pair in enumerate(off) if mask >> bit & 1)
        if all((a, d) in relation for a, b in relation for c, d in relation if b == c):
            found.append(frozenset(relation))
    return found


def up_sets(n: int, order: FrozenSet[Pair]) -> List[int]:
    """Bitmasks of world sets closed under the preorder."""
    return [
        mask for mask in range(1 << n)
        if all(mask >> v & 1 for u, v in order if mask >> u & 1)
    ]


def chains(n: int, max_length: int) -> List[Chain]:
    """Strictly increasing chains of non-empty world sets, shortest first."""
    subsets = list(range(1, 1 << n))
    found: List[Chain] = [()]
    frontier: List[Chain] = [()]
    for _ in range(max_length):
        grown = []
        for chain in frontier:
            for s in subsets:
                if not chain or (chain[-1] & s == chain[-1] and chain[-1] != s):
                    grown.append(chain + (s,))
        found.extend(grown)
        frontier = grown
    return found


def components(n: int, order: FrozenSet[Pair]) -> List[Tuple[int, ...]]:
    """Connected components of the symmetric closure of ``order``."""
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in order:
        parent[find(u)] = find(v)
    groups: Dict[int, List[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def sphere_assignments(n: int, order: FrozenSet[Pair], bounds: ModelBounds) -> Iterator[Tuple[Chain, ...]]:
    """Per-world sphere systems that are constant along accessibility."""
    options = chains(n, bounds.max_spheres)
    if bounds.require_uniform_spheres:
        for chain in options:
            yield tuple(chain for _ in range(n))
        return
    groups = components(n, order)
    for picks in product(options, repeat=len(groups)):
        systems: List[Chain] = [()] * n
        for group, chain in zip(groups, picks):
            for i in group:
                systems[i] = chain
        yield tuple(systems)


def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i, target in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << target
    return out


def encode(n: int, order: FrozenSet[Pair], systems: Tuple[Chain, ...], val: Tuple[int, ...],
           perm: Sequence[int]) -> Encoding:
    """Encoding of a candidate after renaming world ``i`` to ``perm[i]``."""
    pairs = tuple(sorted((perm[u], perm[v]) for u, v in order))
    renamed: List[Chain] = [()] * n
    for i, chain in enumerate(systems):
        renamed[perm[i]] = tuple(_permute_mask(s, perm) for s in chain)
    return (n, pairs, tuple(renamed), tuple(_permute_mask(m, perm) for m in val))


def is_canonical(n: int, order, systems, val) -> bool:
    identity = encode(n, order, systems, val, range(n))
    return all(identity <= encode(n, order, systems, val, perm) for perm in permutations(range(n)))


def build_model(n: int, order, systems, val, atoms: Sequence[str]) -> FiniteModel:
    names = world_names(n)

    def worlds_of(mask: int) -> FrozenSet[str]:
        return frozenset(names[i] for i in range(n) if mask >> i & 1)

    return FiniteModel(
        worlds=names,
        actual=names[0],
        access=frozenset((names[u], names[v]) for u, v in order),
        spheres={names[i]: tuple(worlds_of(s) for s in systems[i]) for i in range(n)},
        valuation={atom: worlds_of(mask) for atom, mask in zip(atoms, val)},
    )


def model_encoding(m: FiniteModel, atoms: Sequence[str]) -> Encoding:
    """Minimal encoding of ``m`` over world permutations; equal iff isomorphic."""
    index = {w: i for i, w in enumerate(m.worlds)}
    n = len(m.worlds)

    def mask_of(worlds) -> int:
        return sum(1 << index[w] for w in worlds)

    order = frozenset((index[u], index[v]) for u, v in m.access)
    systems = tuple(tuple(mask_of(s) for s in m.sphere_system(w)) for w in m.worlds)
    val = tuple(mask_of(m.true_at(a)) for a in atoms)
    return min(encode(n, order, systems, val, perm) for perm in permutations(range(n)))


def enumerate_models(bounds: ModelBounds = DEFAULT_BOUNDS) -> Iterator[FiniteModel]:
    """
    Yield every admissible model within ``bounds`` up to world renaming.

    Order: by world count, then preorder, sphere systems and valuation, each in the order
    their generators produce them.
    """
    atoms = tuple(bounds.atoms)
    for n in range(1, bounds.max_worlds + 1):
        yielded = 0
        for order in preorders(n, bounds.classical):
            valuations = up_sets(n, order)
            for systems in sphere_assignments(n, order, bounds):
                for val in product(valuations, repeat=len(atoms)):
                    if is_canonical(n, order, systems, val):
                        yielded += 1
                        yield build_model(n, order, systems, val, atoms)
        logger.debug("enumerated %d canonical models with %d worlds", yielded, n)


def count_models(bounds: ModelBounds) -> int:
    return sum(1 for _ in enumerate_models(bounds))
