import unittest
from concurrent.futures import ThreadPoolExecutor
from unittest.mock import patch

from decide.enumeration import ModelBounds, enumerate_models
from decide.search import countermodel, oracle_entails, refuting_world
from semantics.models import FiniteModel
from syntax.errors import CharacteristicMismatch, NonSentence
from syntax.parser import parse_formula

BOUNDS = ModelBounds(max_worlds=3, max_spheres=1, atoms=("p",))
TWO_ATOMS = ModelBounds(max_worlds=2, max_spheres=2, atoms=("p", "q"))


def f(text):
    return parse_formula(text)


class TestCountermodel(unittest.TestCase):

    def test_double_negation_elimination_is_refuted(self):
        witness = countermodel([], f("~~p -> p"), BOUNDS)
        self.assertIsNotNone(witness)
        model, world = witness
        self.assertEqual(world, "w0")
        self.assertEqual(model.worlds, ("w0", "w1"))
        self.assertEqual(model.access, frozenset({("w0", "w0"), ("w0", "w1"), ("w1", "w1")}))
        self.assertEqual(model.true_at("p"), frozenset({"w1"}))

    def test_intuitionistic_non_theorems(self):
        self.assertFalse(oracle_entails([], f("p | ~p"), BOUNDS))
        self.assertFalse(oracle_entails([], f("((p -> q) -> p) -> p"), TWO_ATOMS))

    def test_theorems(self):
        self.assertTrue(oracle_entails([], f("p -> p"), BOUNDS))
        self.assertTrue(oracle_entails([f("p")], f("~~p"), BOUNDS))

    def test_connectedness(self):
        self.assertTrue(oracle_entails([], f("(p^{+} -> q^{+})^{@} | (q^{+} -> p^{+})^{@}"), TWO_ATOMS))

    def test_premises_are_global(self):
        goal = f("(p^{+} -> q^{+})^{@}")
        bounds = ModelBounds(max_worlds=2, max_spheres=1, atoms=("p", "q"))
        self.assertTrue(oracle_entails([], goal, bounds, premises=[f("p -> q")]))
        self.assertFalse(oracle_entails([f("p -> q")], goal, bounds))

    def test_refuting_world_respects_premises(self):
        m = FiniteModel(
            worlds=("a", "b"),
            actual="a",
            access=frozenset({("a", "a"), ("b", "b")}),
            valuation={"p": frozenset({"b"})},
        )
        self.assertEqual(refuting_world(m, [], f("p")), "a")
        self.assertIsNone(refuting_world(m, [], f("p"), premises=[f("p")]))

    def test_inputs_must_be_fn_sentences(self):
        with self.assertRaises(NonSentence):
            countermodel([], f("p^{w(U),@}"), BOUNDS)
        with self.assertRaises(CharacteristicMismatch):
            countermodel([], f("p^{+}"), BOUNDS)

    def test_classical_bounds(self):
        bounds = ModelBounds(max_worlds=2, max_spheres=0, atoms=("p",), classical=True)
        self.assertTrue(oracle_entails([], f("~~p -> p"), bounds))


class TestParallelSearch(unittest.TestCase):

    # threads stand in for processes; the chunking and ordering logic is what is under test
    @patch("decide.search.CHUNK_SIZE", 1)
    @patch("decide.search.ProcessPoolExecutor", ThreadPoolExecutor)
    def test_same_answer_as_one_worker(self):
        for goal in ("~~p -> p", "p | ~p", "p -> p", "((p -> q) -> p) -> p"):
            with self.subTest(goal=goal):
                serial = countermodel([], f(goal), TWO_ATOMS, workers=1)
                parallel = countermodel([], f(goal), TWO_ATOMS, workers=4)
                self.assertEqual(serial, parallel)

    @patch("decide.search.CHUNK_SIZE", 1)
    def test_chunks_are_streamed_and_stop_at_the_first_hit(self):
        submitted = []

        class CountingExecutor(ThreadPoolExecutor):
            def submit(self, fn, *args, **kwargs):
                submitted.append(fn)
                return super().submit(fn, *args, **kwargs)

        with patch("decide.search.ProcessPoolExecutor", CountingExecutor):
            witness = countermodel([], f("~~p -> p"), TWO_ATOMS, workers=2)
        self.assertIsNotNone(witness)
        total = len(list(enumerate_models(TWO_ATOMS)))
        self.assertLess(len(submitted), total)


if __name__ == "__main__":
    unittest.main()
