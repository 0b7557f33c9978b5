import unittest
from pathlib import Path

from decide.enumeration import ModelBounds
from decide.search import oracle_entails
from deduction.checker import check
from deduction.derivation_file import parse_derivation
from deduction.rules import SystemMode
from lewis.proofs import (
    build_connex,
    build_connex_via31,
    build_cpr,
    build_lewis_axiom,
    build_t_detour,
    connex_formula,
)
from lewis.vformulas import (
    CompPoss,
    Might,
    VAtom,
    VFormulaGenerator,
    VNot,
    Would,
    encode,
    format_vformula,
    parse_vformula,
)
from normalize.reductions import find_redexes, normalize
from syntax.errors import ParseError
from syntax.formulas import Characteristic, characteristic, format_formula, is_sentence
from syntax.parser import parse_formula

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

P, Q = VAtom("p"), VAtom("q")
BOUNDS = ModelBounds(max_worlds=2, max_spheres=2, atoms=("p", "q"))


def fixture(name: str):
    return parse_derivation((FIXTURES / name).read_text())


class TestSurfaceSyntax(unittest.TestCase):

    def test_comparison_argument_order(self):
        self.assertEqual(parse_vformula("q =< p"), CompPoss(phi=P, psi=Q))

    def test_conditionals_bind_tighter_than_connectives(self):
        v = parse_vformula("~p []-> q | p <>-> q")
        self.assertEqual(format_vformula(v), "~p []-> q | p <>-> q")
        self.assertEqual(parse_vformula("~(p =< q)"), VNot(CompPoss(phi=Q, psi=P)))

    def test_errors(self):
        with self.assertRaises(ParseError):
            parse_vformula("p =< q =< r")
        with self.assertRaises(ParseError):
            parse_vformula("p^{+}")

    def test_round_trip(self):
        gen = VFormulaGenerator(seed=4)
        for _ in range(200):
            v = gen.formula(3)
            self.assertEqual(parse_vformula(format_vformula(v)), v)


class TestEncoding(unittest.TestCase):

    def test_comparison(self):
        self.assertEqual(format_formula(encode(parse_vformula("q =< p"))), "(p^{+} -> q^{+})^{@}")

    def test_would(self):
        self.assertEqual(
            format_formula(encode(Would(P, Q))),
            "(~p^{+})^{@} | (p^{+} & (p -> q)^{*})^{#}",
        )

    def test_might_is_dual(self):
        self.assertEqual(encode(Might(P, Q)), parse_formula("~((~p^{+})^{@} | (p^{+} & (p -> ~q)^{*})^{#})"))

    def test_encodings_are_fn_sentences(self):
        gen = VFormulaGenerator(seed=9)
        for _ in range(100):
            f = encode(gen.formula(3))
            self.assertIs(characteristic(f), Characteristic.FN)
            self.assertTrue(is_sentence(f))


class TestProofs(unittest.TestCase):

    def test_builders_match_fixtures(self):
        cases = {
            "cpr.drv": build_cpr(P, Q),
            "connex_t.drv": build_connex(P, Q),
            "connex31.drv": build_connex_via31(P, Q),
            "lewis_axiom.drv": build_lewis_axiom(P, Q),
            "t_detour.drv": build_t_detour(P, Q),
            "t_detour3.drv": build_t_detour(P, depth=3),
        }
        for name, built in cases.items():
            with self.subTest(fixture=name):
                self.assertEqual(fixture(name), built)

    def test_builders_check_for_compound_formulas(self):
        phi, psi = parse_vformula("p & ~q"), parse_vformula("p []-> q")
        self.assertTrue(check(build_cpr(phi, psi), SystemMode.IPUC).ok)
        self.assertTrue(check(build_connex(phi, psi), SystemMode.IPUCV).ok)
        self.assertTrue(check(build_connex_via31(phi, psi), SystemMode.IPUCV31).ok)
        self.assertTrue(check(build_lewis_axiom(phi, psi), SystemMode.IPUCV).ok)

    def test_connex_conclusion(self):
        report = check(build_connex(P, Q), SystemMode.IPUCV)
        self.assertEqual(report.conclusion.formula, connex_formula(P, Q))
        self.assertEqual(report.open_hypotheses, frozenset())

    def test_builders_normalize_to_their_conclusion(self):
        phi, psi = parse_vformula("p & ~q"), parse_vformula("p []-> q")
        cases = [
            (build_cpr, SystemMode.IPUC),
            (build_connex, SystemMode.IPUCV),
            (build_connex_via31, SystemMode.IPUCV31),
            (build_lewis_axiom, SystemMode.IPUCV),
        ]
        for build, mode in cases:
            for args in ((P, Q), (phi, psi)):
                with self.subTest(builder=build.__name__, args=args):
                    d = build(*args)
                    before = check(d, mode)
                    normal = normalize(d)
                    after = check(normal, mode)
                    self.assertTrue(after.ok, [str(e) for e in after.errors])
                    self.assertEqual(find_redexes(normal), [])
                    self.assertEqual(after.conclusion, before.conclusion)
                    self.assertLessEqual(after.open_hypotheses, before.open_hypotheses)


class TestOracle(unittest.TestCase):

    def test_valid_principles(self):
        for text in ("p []-> p", "(p | q) =< p | (p | q) =< q"):
            with self.subTest(formula=text):
                self.assertTrue(oracle_entails([], encode(parse_vformula(text)), BOUNDS))
        self.assertTrue(oracle_entails([], connex_formula(P, Q), BOUNDS))

    def test_comparison_needs_a_global_premise(self):
        goal = encode(parse_vformula("q =< p"))
        rule = encode(parse_vformula("p -> q"))
        bounds = ModelBounds(max_worlds=2, max_spheres=1, atoms=("p", "q"))
        self.assertTrue(oracle_entails([], goal, bounds, premises=[rule]))
        self.assertFalse(oracle_entails([rule], goal, bounds))

    def test_might_is_not_valid(self):
        self.assertFalse(oracle_entails([], encode(parse_vformula("p <>-> p")), BOUNDS))


if __name__ == "__main__":
    unittest.main()
