import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

from cli import run

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# every file under fixtures/ must be driven through the command line below
COVERED = {
    "bad_impe.drv",
    "classabs.drv",
    "connex31.drv",
    "connex_t.drv",
    "cpr.drv",
    "intuitionistic.model",
    "lewis_axiom.drv",
    "nested.model",
    "t_detour.drv",
    "t_detour3.drv",
}

CONNEX = "(p^{+} -> q^{+})^{@} | (q^{+} -> p^{+})^{@}"


def fx(name: str) -> str:
    return str(FIXTURES / name)


def call(*argv: str):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stderr(io.StringIO()):
        code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestFixtureCoverage(unittest.TestCase):

    def test_every_fixture_is_exercised(self):
        self.assertEqual(set(os.listdir(FIXTURES)), COVERED)


class TestParseAndTranslate(unittest.TestCase):

    def test_parse_prints_the_canonical_form(self):
        self.assertEqual(call("parse", "  p&q ->r "), (0, "p & q -> r\n", ""))

    def test_translate(self):
        self.assertEqual(call("translate", "q =< p"), (0, "(p^{+} -> q^{+})^{@}\n", ""))

    def test_malformed_formula(self):
        code, out, err = call("parse", "p &")
        self.assertEqual((code, out), (2, ""))
        self.assertTrue(err.startswith("error: malformed formula"))


class TestEvalAndResolve(unittest.TestCase):

    def test_nested_spheres(self):
        model = fx("nested.model")
        self.assertEqual(call("eval", "p^{+,@}", "--model", model), (1, "FALSE\n", ""))
        self.assertEqual(call("eval", "p^{+,#}", "--model", model), (0, "TRUE\n", ""))
        self.assertEqual(call("eval", "p^{+}", "--model", model, "--nbhd", "0"), (1, "FALSE\n", ""))
        self.assertEqual(call("eval", "p^{+}", "--model", model, "--nbhd", "1"), (0, "TRUE\n", ""))

    def test_assignments(self):
        model = fx("nested.model")
        self.assertEqual(
            call("eval", "p^{w(U)}", "--model", model, "--nbhd", "1", "--assign", "w(U)=b"), (0, "TRUE\n", ""),
        )
        self.assertEqual(
            call("eval", "p^{w(U),n(N)}", "--model", model, "--assign", "w(U)=b,n(N)=0"), (1, "FALSE\n", ""),
        )

    def test_resolve_under_a_context(self):
        model = fx("nested.model")
        self.assertEqual(call("resolve", "p", "--model", model, "--context", "@,+"), (1, "FALSE\n", ""))
        self.assertEqual(call("resolve", "p", "--model", model, "--context", "#,+"), (0, "TRUE\n", ""))
        self.assertEqual(call("resolve", "p", "--model", model, "--world", "b"), (0, "TRUE\n", ""))

    def test_intuitionistic_model(self):
        model = fx("intuitionistic.model")
        self.assertEqual(call("eval", "~~p", "--model", model), (0, "TRUE\n", ""))
        self.assertEqual(call("eval", "p", "--model", model), (1, "FALSE\n", ""))
        self.assertEqual(call("eval", "~~p -> p", "--model", model), (1, "FALSE\n", ""))
        self.assertEqual(call("eval", "p", "--model", model, "--world", "v"), (0, "TRUE\n", ""))

    def test_usage_errors(self):
        model = fx("nested.model")
        cases = [
            (("eval", "p", "--model", model, "--world", "zz"), "error: unknown world zz\n"),
            (("eval", "p^{+}", "--model", model, "--nbhd", "5"), "error: a has no neighbourhood 5\n"),
            (("eval", "p^{w(U)}", "--model", model, "--nbhd", "0", "--assign", "U=b"), "error: bad assignment 'U=b'\n"),
            (("eval", "p^{+}", "--model", model), "error: Fw formula evaluated at a model point\n"),
            (("eval", "p", "--model", fx("missing.model")), None),
        ]
        for argv, message in cases:
            with self.subTest(argv=argv):
                code, out, err = call(*argv)
                self.assertEqual((code, out), (2, ""))
                if message is not None:
                    self.assertEqual(err, message)
                else:
                    self.assertTrue(err.startswith("error: cannot read"))

    def test_inadmissible_model(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "bad.model"
            path.write_text("worlds: [u,v]\naccess: [[u,u],[u,v],[v,v]]\nval: {p: [u]}\n")
            code, out, err = call("eval", "p", "--model", str(path))
        self.assertEqual((code, out), (2, ""))
        self.assertEqual(err, "error: invalid model: p holds at u but not at v\n")


class TestCheckAndNormalize(unittest.TestCase):

    def test_check_valid(self):
        self.assertEqual(
            call("check", fx("cpr.drv"), "--mode", "ipuc"),
            (0, "VALID\nconclusion: (p^{+} -> q^{+})^{@} @ []\nopen: p -> q @ []\n", ""),
        )
        self.assertEqual(call("check", fx("connex_t.drv")), (0, f"VALID\nconclusion: {CONNEX} @ []\n", ""))
        self.assertEqual(
            call("check", fx("connex31.drv"), "--mode", "ipucv31"), (0, f"VALID\nconclusion: {CONNEX} @ []\n", ""),
        )
        code, out, _ = call("check", fx("lewis_axiom.drv"))
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines()[0], "VALID")
        self.assertEqual(call("check", fx("classabs.drv"), "--mode", "puc")[0], 0)

    def test_check_invalid(self):
        self.assertEqual(
            call("check", fx("connex_t.drv"), "--mode", "ipuc"),
            (1, "INVALID\nn7 (TSPLIT): rule not in system\n", ""),
        )
        self.assertEqual(
            call("check", fx("classabs.drv"), "--mode", "ipuc"),
            (1, "INVALID\nn2 (CLASSABS): rule not in system\n", ""),
        )
        self.assertEqual(
            call("check", fx("bad_impe.drv")),
            (1, "INVALID\nn3 (IMPE): minor premise must be p @ [], found q @ []\n", ""),
        )

    def test_unknown_mode(self):
        self.assertEqual(call("check", fx("cpr.drv"), "--mode", "s4")[0], 2)

    def test_normalize_to_stdout(self):
        self.assertEqual(call("normalize", fx("t_detour.drv")), (0, 'h1 HYP "p^{+}" @ "T(q)" ;\n', ""))

    def test_normalize_to_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "normal.drv"
            self.assertEqual(
                call("normalize", fx("t_detour3.drv"), "--output", str(target)), (0, "NORMALIZED 3\n", ""),
            )
            self.assertEqual(target.read_text(), 'n1 TAXIOM "p^{+}" @ "T(p)" ;\n')

    def test_normalize_to_an_unwritable_path(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "missing" / "normal.drv"
            with self.assertLogs("cli", level="ERROR") as logs:
                code, out, err = call("normalize", fx("t_detour3.drv"), "--output", str(target))
        self.assertEqual((code, out), (2, ""))
        self.assertTrue(err.startswith(f"error: cannot write {target}: "))
        self.assertIn("writing", logs.output[0])

    def test_normalize_budget(self):
        code, out, err = call("normalize", fx("t_detour3.drv"), "--budget", "2")
        self.assertEqual((code, out, err), (2, "", "error: no normal form within 2 steps\n"))

    def test_normalize_rejects_invalid_derivations(self):
        self.assertEqual(call("normalize", fx("bad_impe.drv"))[:2], (1, "INVALID\nn3 (IMPE): minor premise must be p @ [], found q @ []\n"))


class TestCountermodel(unittest.TestCase):

    def test_double_negation_elimination(self):
        expected = (
            "COUNTERMODEL\n"
            "worlds: [w0,w1]\n"
            "actual: w0\n"
            "access: [[w0,w0],[w0,w1],[w1,w1]]\n"
            "spheres: {w0: [], w1: []}\n"
            "val: {p: [w1]}\n"
        )
        self.assertEqual(call("countermodel", "--goal", "~~p -> p", "--max-worlds", "3"), (1, expected, ""))

    def test_no_countermodel(self):
        self.assertEqual(call("countermodel", "--goal", "p -> p"), (0, "NO-COUNTERMODEL-WITHIN-BOUNDS\n", ""))

    def test_premises_and_hypotheses(self):
        goal = "(p^{+} -> q^{+})^{@}"
        bounds = ("--max-worlds", "2", "--max-spheres", "1")
        self.assertEqual(call("countermodel", "--goal", goal, "--premise", "p -> q", *bounds)[0], 0)
        self.assertEqual(call("countermodel", "--goal", goal, "--hyp", "p -> q", *bounds)[0], 1)

    def test_output_is_stable(self):
        argv = ("countermodel", "--goal", "((p -> q) -> p) -> p", "--max-worlds", "2")
        self.assertEqual(call(*argv), call(*argv))

    def test_goal_is_required(self):
        self.assertEqual(call("countermodel")[0], 2)


class TestAudit(unittest.TestCase):

    def test_canary(self):
        code, out, _ = call("audit", "--mode", "ipuc", "--max-worlds", "1", "--max-spheres", "0", "--atoms", "p", "--canary")
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[:2], ["mode: ipuc", "models: 2"])
        self.assertTrue(any(line.startswith("IMPE-CANARY") and line.endswith("COUNTEREXAMPLE") for line in lines))
        self.assertIn("counterexample to IMPE-CANARY at w0: ", out)

    def test_classical_absurdity(self):
        argv = ("audit", "--mode", "puc", "--max-worlds", "2", "--max-spheres", "0", "--atoms", "p")
        code, out, _ = call(*argv)
        self.assertEqual(code, 1)
        row = next(line for line in out.splitlines() if line.startswith("CLASSABS (7)"))
        self.assertTrue(row.endswith("COUNTEREXAMPLE"))
        self.assertIn("counterexample to CLASSABS (7) at ", out)
        self.assertEqual(call(*argv, "--classical")[0], 0)


class TestUsage(unittest.TestCase):

    def test_no_command(self):
        self.assertEqual(call()[0], 2)

    def test_help(self):
        with redirect_stdout(io.StringIO()):
            self.assertEqual(call("--help")[0], 0)


if __name__ == "__main__":
    unittest.main()
