import unittest
from pathlib import Path

from decide.enumeration import ModelBounds, enumerate_models
from semantics.model_file import format_model, parse_model
from semantics.models import FiniteModel
from syntax.errors import ModelFormatError, ParseError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


class TestParseModel(unittest.TestCase):

    def test_nested_fixture(self):
        m = parse_model((FIXTURES / "nested.model").read_text())
        spheres = (frozenset({"a"}), frozenset({"a", "b"}))
        self.assertEqual(m, FiniteModel(
            worlds=("a", "b"),
            actual="a",
            access=frozenset({("a", "a"), ("b", "b")}),
            spheres={"a": spheres, "b": spheres},
            valuation={"p": frozenset({"b"})},
        ))

    def test_defaults(self):
        m = parse_model("worlds: [x, y]\n")
        self.assertEqual(m.actual, "x")
        self.assertEqual(m.access, frozenset({("x", "x"), ("y", "y")}))
        self.assertEqual(m.sphere_system("x"), ())
        self.assertEqual(m.true_at("p"), frozenset())

    def test_format_errors(self):
        cases = {
            "actual: a\n": "field worlds is required",
            "worlds: [a]\nworlds: [a]\n": "given twice",
            "worlds: [a, a]\n": "duplicate world id",
            "worlds: []\n": "at least one world",
            "worlds: [a]\nval: {p: [b]}\n": "unknown world b",
            "worlds: [a]\nspheres: {a: [[a, c]]}\n": "unknown world c",
        }
        for text, reason in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(ModelFormatError) as ctx:
                    parse_model(text)
                self.assertIn(reason, str(ctx.exception))

    def test_syntax_errors(self):
        with self.assertRaises(ParseError):
            parse_model("worlds: [a\n")
        with self.assertRaises(ParseError):
            parse_model("colour: blue\n")


class TestFormatModel(unittest.TestCase):

    def test_canonical_text(self):
        m = parse_model((FIXTURES / "intuitionistic.model").read_text())
        self.assertEqual(
            format_model(m),
            "worlds: [u,v]\n"
            "actual: u\n"
            "access: [[u,u],[u,v],[v,v]]\n"
            "spheres: {}\n"
            "val: {p: [v]}\n",
        )

    def test_enumerated_models_survive_the_text_form(self):
        for m in enumerate_models(ModelBounds(max_worlds=2, max_spheres=2, atoms=("p",))):
            self.assertEqual(parse_model(format_model(m)), m)


if __name__ == "__main__":
    unittest.main()
