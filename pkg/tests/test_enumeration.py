import unittest
from itertools import chain, combinations, product

from decide.enumeration import (
    ModelBounds,
    chains,
    count_models,
    enumerate_models,
    model_encoding,
    preorders,
    up_sets,
)
from semantics.models import FiniteModel, validate_model


def subsets(items):
    items = list(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def brute_force(bounds: ModelBounds):
    """Every labelled admissible model within uniform-sphere bounds, isomorphic copies included."""
    for n in range(1, bounds.max_worlds + 1):
        worlds = tuple(f"w{i}" for i in range(n))
        diagonal = frozenset((w, w) for w in worlds)
        off = [(u, v) for u in worlds for v in worlds if u != v]
        systems = [()]
        if bounds.max_spheres >= 1:
            systems += [(s,) for s in subsets(worlds) if s]
        for extra in subsets(off):
            for system in systems:
                for vals in product(subsets(worlds), repeat=len(bounds.atoms)):
                    m = FiniteModel(
                        worlds=worlds,
                        actual=worlds[0],
                        access=diagonal | extra,
                        spheres={w: system for w in worlds},
                        valuation=dict(zip(bounds.atoms, vals)),
                    )
                    if validate_model(m).ok:
                        yield m


class TestBuildingBlocks(unittest.TestCase):

    def test_preorders(self):
        self.assertEqual(len(preorders(1)), 1)
        self.assertEqual(len(preorders(2)), 4)
        self.assertEqual(len(preorders(3)), 29)
        self.assertEqual(preorders(3, classical=True), [frozenset({(0, 0), (1, 1), (2, 2)})])

    def test_up_sets(self):
        order = frozenset({(0, 0), (1, 1), (0, 1)})
        self.assertEqual(up_sets(2, order), [0, 2, 3])

    def test_chains_are_strictly_increasing(self):
        found = chains(2, 2)
        self.assertEqual(found[0], ())
        self.assertIn((1, 3), found)
        self.assertNotIn((3, 1), found)
        self.assertNotIn((1, 1), found)
        self.assertTrue(all(len(c) <= 2 for c in found))

    def test_bounds_are_checked(self):
        with self.assertRaises(ValueError):
            ModelBounds(max_worlds=0)
        with self.assertRaises(ValueError):
            ModelBounds(max_spheres=-1)


class TestEnumeration(unittest.TestCase):

    def test_small_counts(self):
        self.assertEqual(count_models(ModelBounds(1, 0, ("p",))), 2)
        self.assertEqual(count_models(ModelBounds(2, 0, ("p",))), 10)

    def test_every_model_is_admissible(self):
        for m in enumerate_models(ModelBounds(3, 2, ("p",))):
            self.assertTrue(validate_model(m).ok, m)

    def test_matches_brute_force_up_to_isomorphism(self):
        bounds = ModelBounds(max_worlds=2, max_spheres=1, atoms=("p",))
        expected = {model_encoding(m, bounds.atoms) for m in brute_force(bounds)}
        produced = [model_encoding(m, bounds.atoms) for m in enumerate_models(bounds)]
        self.assertEqual(len(produced), len(set(produced)))
        self.assertEqual(set(produced), expected)

    def test_deterministic_order(self):
        bounds = ModelBounds(2, 2, ("p", "q"))
        self.assertEqual(list(enumerate_models(bounds)), list(enumerate_models(bounds)))

    def test_classical_models_use_identity(self):
        for m in enumerate_models(ModelBounds(3, 1, ("p",), classical=True)):
            self.assertEqual(m.access, frozenset((w, w) for w in m.worlds))

    def test_non_uniform_spheres_add_models(self):
        uniform = count_models(ModelBounds(2, 1, ("p",)))
        mixed = count_models(ModelBounds(2, 1, ("p",), require_uniform_spheres=False))
        self.assertGreater(mixed, uniform)
        for m in enumerate_models(ModelBounds(2, 1, ("p",), require_uniform_spheres=False)):
            self.assertTrue(validate_model(m).ok)

    def test_candidate_count_covers_the_output(self):
        bounds = ModelBounds(2, 1, ("p",))
        self.assertGreaterEqual(bounds.candidate_count(), count_models(bounds))


if __name__ == "__main__":
    unittest.main()
