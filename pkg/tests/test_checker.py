import unittest
from pathlib import Path
from unittest.mock import patch

from decide.enumeration import ModelBounds
from decide.search import countermodel
from deduction.checker import Application, Assumption, check, check_application, check_node
from deduction.derivation import DerivationNode, Judgement, hyp, iter_nodes, node, open_leaves, premise
from deduction.derivation_file import parse_derivation
from deduction.generators import DerivationGenerator
from deduction.rules import RuleId, SystemMode
from syntax.formulas import (
    AllNbhd,
    AllWorlds,
    And,
    Atom,
    BotN,
    BotW,
    Imp,
    NbhdVar,
    Or,
    SomeNbhd,
    SomeWorld,
    Testimonial,
    WorldVar,
    append_labels,
)
from syntax.parser import parse_formula

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

P, Q = Atom("p"), Atom("q")
EVERYWHERE = (AllNbhd(), AllWorlds())
N = NbhdVar("N")


def fixture(name: str) -> DerivationNode:
    return parse_derivation((FIXTURES / name).read_text())


def messages(d: DerivationNode, mode: SystemMode = SystemMode.IPUC):
    return [str(e) for e in check(d, mode).errors]


def modus_ponens() -> DerivationNode:
    return node(RuleId.IMP_E, Q, (), hyp("h1", Imp(P, Q)), hyp("h2", P))


class TestPropositionalRules(unittest.TestCase):

    def test_modus_ponens(self):
        report = check(modus_ponens(), SystemMode.IPUC)
        self.assertTrue(report.ok)
        self.assertEqual(report.conclusion, Judgement(Q))
        self.assertEqual(report.open_hypotheses, {Judgement(Imp(P, Q)), Judgement(P)})

    def test_implication_introduction_discharges(self):
        d = node(RuleId.IMP_I, Imp(P, Q), (), modus_ponens(), discharges=("h2",))
        report = check(d, SystemMode.IPUC)
        self.assertTrue(report.ok)
        self.assertEqual(report.open_hypotheses, {Judgement(Imp(P, Q))})

    def test_wrong_minor_premise(self):
        d = node(RuleId.IMP_E, P, (), hyp("h1", Imp(P, Q)), hyp("h2", Q))
        self.assertEqual(messages(d), ["root (IMPE): minor premise must be p @ [], found q @ []"])

    def test_error_paths_name_premises(self):
        bad = node(RuleId.AND_E_L, P, (), hyp("h1", Or(P, Q)))
        d = node(RuleId.AND_I, And(P, Q), (), bad, hyp("h2", Q))
        self.assertEqual(messages(d), ["0 (ANDEL): premise must be a conjunction"])

    def test_arity(self):
        d = node(RuleId.AND_I, And(P, Q), (), hyp("h1", P))
        self.assertEqual(messages(d), ["root (ANDI): expects 2 premises, found 1"])

    def test_judgement_must_fit(self):
        d = hyp("h1", parse_formula("p^{+}"))
        self.assertIn("does not fit", messages(d)[0])

    def test_unknown_discharge(self):
        d = node(RuleId.IMP_I, Imp(P, Q), (), hyp("h1", Q), discharges=("zz",))
        self.assertEqual(messages(d), ["root (IMPI): discharges unknown hypothesis zz"])

    def test_hypothesis_id_reused(self):
        d = node(RuleId.AND_I, And(P, Q), (), hyp("h1", P), hyp("h1", Q))
        self.assertIn("hypothesis id h1 used for different judgements", messages(d)[0])

    def test_discharged_id_also_open(self):
        closed = node(RuleId.IMP_I, Imp(P, P), (), hyp("h1", P), discharges=("h1",))
        d = node(RuleId.AND_I, And(Imp(P, P), P), (), closed, hyp("h1", P))
        self.assertIn("hypothesis h1 is discharged but also used outside the discharge", messages(d)[0])

    def test_disjunction_elimination_under_universal_label(self):
        major = hyp("o", Or(P, Q), EVERYWHERE)
        d = node(
            RuleId.OR_E, P, EVERYWHERE, major,
            hyp("a", P, EVERYWHERE),
            node(RuleId.AND_E_L, P, EVERYWHERE, hyp("b", And(P, Q), EVERYWHERE)),
            discharges=("a",),
        )
        self.assertEqual(messages(d), ["root (ORE): context must not contain a universal label"])

    def test_generated_derivations_check(self):
        for d in DerivationGenerator(seed=3).derivations(50):
            report = check(d, SystemMode.IPUC)
            self.assertTrue(report.ok, [str(e) for e in report.errors])

    def test_generated_derivations_reach_labeled_rules(self):
        rules, variables = set(), set()
        for d in DerivationGenerator(seed=3).derivations(50):
            for _, n in iter_nodes(d):
                rules.add(n.rule)
                variables |= n.judgement.variables()
        labeled = {
            RuleId.L2C, RuleId.C2L, RuleId.ALL_N_E, RuleId.ALL_N_I, RuleId.ALL_W_E, RuleId.ALL_W_I,
            RuleId.SOME_W_I, RuleId.SOME_W_E, RuleId.SOME_N_I, RuleId.SOME_N_E,
            RuleId.LIFT, RuleId.BOT_TRANSFER,
        }
        self.assertLessEqual(labeled, rules)
        self.assertTrue(any(isinstance(v, NbhdVar) for v in variables))
        self.assertTrue(any(isinstance(v, WorldVar) for v in variables))

    def test_larger_systems_accept_what_smaller_ones_do(self):
        for d in DerivationGenerator(seed=17).derivations(30):
            self.assertTrue(check(d, SystemMode.IPUC).ok)
            for mode in (SystemMode.IPUCV, SystemMode.IPUCV31, SystemMode.PUC):
                with self.subTest(mode=mode):
                    report = check(d, mode)
                    self.assertTrue(report.ok, [str(e) for e in report.errors])

    def test_checked_sentences_have_no_countermodel(self):
        bounds = ModelBounds(max_worlds=2, max_spheres=1, atoms=("p", "q"))
        compared = 0
        for d in DerivationGenerator(seed=13, max_nodes=25).derivations(30):
            report = check(d, SystemMode.IPUC)
            self.assertTrue(report.ok)
            leaves = open_leaves(d)
            if any(leaf.judgement.variables() for leaf in leaves) or report.conclusion.variables():
                continue
            hyps = [leaf.judgement.formula for leaf in leaves if leaf.rule is RuleId.HYP]
            globals_ = [leaf.judgement.formula for leaf in leaves if leaf.rule is RuleId.PREMISE]
            self.assertIsNone(countermodel(hyps, report.conclusion.formula, bounds, premises=globals_))
            compared += 1
        self.assertGreater(compared, 0)


class TestQuantifierRules(unittest.TestCase):

    def lifted(self) -> DerivationNode:
        return node(RuleId.LIFT, P, (N, WorldVar("U")), premise("g1", P))

    def test_universal_introduction_from_a_lifted_premise(self):
        worlds = node(RuleId.ALL_W_I, P, (N, AllWorlds()), self.lifted(), binds=WorldVar("U"))
        d = node(RuleId.ALL_N_I, P, EVERYWHERE, worlds, binds=N)
        report = check(d, SystemMode.IPUC)
        self.assertTrue(report.ok, messages(d))
        self.assertEqual(report.open_hypotheses, {Judgement(P)})

    def test_variables_only_follow_variables(self):
        d = node(RuleId.LIFT, P, (AllNbhd(), WorldVar("U")), premise("g1", P))
        self.assertEqual(messages(d), ["root (LIFT): context variable U follows a quantifier label"])

    def test_eigenvariable_in_open_hypothesis(self):
        d = node(RuleId.ALL_W_I, P, (N, AllWorlds()), hyp("h1", P, (N, WorldVar("U"))), binds=WorldVar("U"))
        self.assertEqual(messages(d), ["root (ALLWI): eigenvariable U occurs in open hypothesis h1"])

    def test_lift_needs_a_closed_derivation(self):
        d = node(RuleId.LIFT, P, EVERYWHERE, hyp("h1", P))
        self.assertEqual(messages(d), ["root (LIFT): lifted derivation depends on hypothesis h1"])

    def test_premises_sit_at_the_empty_context(self):
        d = DerivationNode(Judgement(P, EVERYWHERE), RuleId.PREMISE, hyp_id="g1")
        self.assertEqual(messages(d), ["root (PREMISE): premises are asserted at the empty context"])


class TestVariableDiscipline(unittest.TestCase):

    def test_implication_introduction_under_a_universal_label(self):
        # (p^{*,@} -> q^{*,@}) does not give (p^{*} -> q^{*})^{@}.
        every = append_labels(P, AllWorlds(), AllNbhd()), append_labels(Q, AllWorlds(), AllNbhd())
        local = append_labels(P, AllWorlds()), append_labels(Q, AllWorlds())
        assumed = hyp("k", Imp(*every))
        instance = hyp("h", local[0], (AllNbhd(),))
        folded = node(RuleId.C2L, every[0], (), instance)
        reached = node(RuleId.IMP_E, every[1], (), assumed, folded)
        unfolded = node(RuleId.L2C, local[1], (AllNbhd(),), reached)
        introduced = node(RuleId.IMP_I, Imp(*local), (AllNbhd(),), unfolded, discharges=("h",))
        goal = append_labels(Imp(*local), AllNbhd())
        d = node(RuleId.C2L, goal, (), introduced)
        self.assertEqual(
            messages(d), ["0 (IMPI): context must be empty or a single neighbourhood variable"],
        )
        bounds = ModelBounds(max_worlds=2, max_spheres=2, atoms=("p", "q"))
        self.assertIsNotNone(countermodel([Imp(*every)], goal, bounds))

    def test_implication_introduction_under_a_world_variable(self):
        d = node(RuleId.IMP_I, Imp(P, P), (N, WorldVar("U")), hyp("h", P, (N, WorldVar("U"))), discharges=("h",))
        self.assertEqual(
            messages(d), ["root (IMPI): context must be empty or a single neighbourhood variable"],
        )

    def test_transfer_must_not_forget_a_neighbourhood(self):
        # botW^{@} holds at a world without spheres, botN never does.
        vacuous = append_labels(BotW(), AllNbhd())
        assumed = hyp("h", vacuous)
        unfolded = node(RuleId.L2C, BotW(), (AllNbhd(),), assumed)
        chosen = node(RuleId.ALL_N_E, BotW(), (NbhdVar("M"),), unfolded)
        transferred = node(RuleId.BOT_TRANSFER, BotN(), (), chosen)
        d = node(RuleId.IMP_I, Imp(vacuous, BotN()), (), transferred, discharges=("h",))
        self.assertEqual(
            messages(d), ["0 (BOTTRANSFER): variable M is not anchored by the conclusion or an open hypothesis"],
        )
        bounds = ModelBounds(max_worlds=1, max_spheres=0, atoms=("p",))
        self.assertIsNotNone(countermodel([], Imp(vacuous, BotN()), bounds))

    def test_existential_introduction_must_not_forget_a_neighbourhood(self):
        vacuous = append_labels(P, AllWorlds(), AllNbhd())
        unfolded = node(RuleId.L2C, append_labels(P, AllWorlds()), (AllNbhd(),), hyp("h", vacuous))
        chosen = node(RuleId.ALL_N_E, append_labels(P, AllWorlds()), (NbhdVar("M"),), unfolded)
        d = node(RuleId.SOME_N_I, append_labels(P, AllWorlds()), (SomeNbhd(),), chosen)
        self.assertEqual(
            messages(d), ["root (SOMENI): variable M is not anchored by the conclusion or an open hypothesis"],
        )

    def test_anchored_by_an_open_hypothesis(self):
        anchor = hyp("h", P, (N, WorldVar("U")))
        d = node(RuleId.SOME_W_I, P, (N, SomeWorld()), anchor)
        folded = node(RuleId.C2L, append_labels(P, SomeWorld()), (N,), d)
        dropped = node(RuleId.SOME_N_I, append_labels(P, SomeWorld()), (SomeNbhd(),), folded)
        report = check(dropped, SystemMode.IPUC)
        self.assertTrue(report.ok, messages(dropped))
        self.assertEqual(report.open_hypotheses, {Judgement(P, (N, WorldVar("U")))})

    def test_hereditary_splits_need_a_pointed_context(self):
        somewhere = (N, SomeWorld())
        goal = Judgement(P, somewhere)
        a = Application(
            RuleId.T_SPLIT, goal, (goal, goal),
            discharged=((Assumption("t1", Judgement(append_labels(P, SomeWorld()), somewhere + (Testimonial(Q),))),), ()),
            assumptions=((), ()),
        )
        self.assertEqual(check_application(a, SystemMode.IPUCV), "context must not contain an existential label")
        pointed = Application(
            RuleId.T_SPLIT, Judgement(P, (N, WorldVar("U"))), (Judgement(P, (N, WorldVar("U"))),) * 2,
            discharged=((Assumption("t1", Judgement(append_labels(P, SomeWorld()), (N, WorldVar("U"), Testimonial(Q)))),), ()),
            assumptions=((), ()),
        )
        self.assertIsNone(check_application(pointed, SystemMode.IPUCV))

    def test_testimonial_axiom_needs_a_pointed_context(self):
        d = node(RuleId.T_AXIOM, append_labels(P, SomeWorld()), (N, SomeWorld(), Testimonial(P)))
        self.assertEqual(
            messages(d, SystemMode.IPUCV), ["root (TAXIOM): context must not contain an existential label"],
        )
        self.assertTrue(check(node(RuleId.T_AXIOM, append_labels(P, SomeWorld()), (N, WorldVar("U"), Testimonial(P))), SystemMode.IPUCV).ok)


class TestModes(unittest.TestCase):

    def test_classical_absurdity(self):
        d = fixture("classabs.drv")
        self.assertTrue(check(d, SystemMode.PUC).ok)
        self.assertEqual(messages(d, SystemMode.IPUC), ["n2 (CLASSABS): rule not in system"])

    def test_hereditary_rules_need_the_v_modes(self):
        d = fixture("connex_t.drv")
        self.assertEqual(
            messages(d, SystemMode.IPUC),
            ["n7 (TSPLIT): rule not in system", "n1 (TI): rule not in system", "n4 (TI): rule not in system"],
        )
        for mode in (SystemMode.IPUCV, SystemMode.IPUCV31):
            report = check(d, mode)
            self.assertTrue(report.ok)
            self.assertEqual(report.open_hypotheses, frozenset())

    def test_rule_31_needs_its_own_mode(self):
        d = fixture("connex31.drv")
        self.assertTrue(check(d, SystemMode.IPUCV31).ok)
        self.assertEqual(messages(d, SystemMode.IPUCV), ["n5 (RULE31): rule not in system"])

    def test_fixtures(self):
        self.assertTrue(check(fixture("cpr.drv"), SystemMode.IPUC).ok)
        self.assertTrue(check(fixture("lewis_axiom.drv"), SystemMode.IPUCV).ok)
        self.assertTrue(check(fixture("t_detour.drv"), SystemMode.IPUCV).ok)
        self.assertTrue(check(fixture("t_detour3.drv"), SystemMode.IPUCV).ok)
        self.assertEqual(
            messages(fixture("bad_impe.drv")),
            ["n3 (IMPE): minor premise must be p @ [], found q @ []"],
        )

    def test_negative_rules_are_kept_out_of_universal_neighbourhoods(self):
        d = node(RuleId.AND_I, And(P, Q), EVERYWHERE, hyp("h1", P, EVERYWHERE), hyp("h2", Q, EVERYWHERE))
        self.assertIsNone(check_node(d, SystemMode.IPUCV))
        with patch("deduction.checker.NEGATIVEISH", frozenset({RuleId.AND_I})):
            self.assertEqual(
                check_node(d, SystemMode.IPUCV), "context must not contain a universal neighbourhood label"
            )
            self.assertIsNone(check_node(d, SystemMode.IPUC))


if __name__ == "__main__":
    unittest.main()
