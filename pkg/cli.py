"""Command-line entry point.

Results go to stdout and are byte-identical between runs; logs go to stderr. Exit codes:
0 for success, true or valid; 1 for false, invalid or a countermodel; 2 for usage and input
errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

import settings
from decide.enumeration import ModelBounds
from decide.search import countermodel
from deduction.audit import CANARY, AuditReport, audit_rules
from deduction.checker import check
from deduction.derivation_file import format_derivation, parse_derivation
from deduction.rules import RuleId, parse_mode
from lewis.vformulas import encode, parse_vformula
from normalize.reductions import DEFAULT_BUDGET, normalize_with_trace
from semantics.evaluator import evaluate, resolve
from semantics.model_file import format_model, parse_model
from semantics.models import Assignment, EvalPoint, FiniteModel, validate_model
from syntax.errors import KernelError, ModelFormatError
from syntax.formulas import atoms_of, format_formula
from syntax.parser import parse_context, parse_formula

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


class UsageError(KernelError):
    """Bad command-line input that argparse cannot detect on its own."""


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as e:
        logger.error("writing %s failed: %s", path, e.strerror)
        raise UsageError(f"cannot write {path}: {e.strerror}") from e


def _load_model(path: str) -> FiniteModel:
    m = parse_model(_read(path))
    report = validate_model(m)
    if not report.ok:
        raise ModelFormatError(f"invalid model: {report.violations[0].message}")
    return m


def _parse_assignment(text: Optional[str], m: FiniteModel, world: str) -> Assignment:
    """``w(U)=w1,n(N)=0``: world variables name a world, neighbourhood variables an index."""
    sigma = Assignment()
    if not text:
        return sigma
    system = m.sphere_system(world)
    for item in text.split(","):
        name, _, value = item.strip().partition("=")
        if len(name) < 4 or name[1] != "(" or name[-1] != ")" or not value:
            raise UsageError(f"bad assignment {item!r}")
        var = name[2:-1]
        if name[0] == "w":
            if value not in m.worlds:
                raise UsageError(f"unknown world {value}")
            sigma = sigma.bind_world(var, value)
        elif name[0] == "n":
            if not value.isdigit() or int(value) >= len(system):
                raise UsageError(f"{world} has no neighbourhood {value}")
            sigma = sigma.bind_nbhd(var, system[int(value)])
        else:
            raise UsageError(f"bad assignment {item!r}")
    return sigma


def _bounds(args, atoms: Sequence[str]) -> ModelBounds:
    return ModelBounds(
        max_worlds=args.max_worlds,
        max_spheres=args.max_spheres,
        atoms=tuple(atoms),
        require_uniform_spheres=not args.non_uniform,
    )


def _atoms_flag(args) -> Optional[List[str]]:
    if args.atoms is None:
        return None
    return [a.strip() for a in args.atoms.split(",") if a.strip()]


def _verdict(value: bool, out: TextIO) -> int:
    out.write("TRUE\n" if value else "FALSE\n")
    return EXIT_OK if value else EXIT_NEGATIVE


# subcommands

def cmd_parse(args, out: TextIO) -> int:
    out.write(format_formula(parse_formula(args.formula)) + "\n")
    return EXIT_OK


def cmd_eval(args, out: TextIO) -> int:
    m = _load_model(args.model)
    world = args.world or m.actual
    if world not in m.worlds:
        raise UsageError(f"unknown world {world}")
    selected = None
    if args.nbhd is not None:
        system = m.sphere_system(world)
        if not 0 <= args.nbhd < len(system):
            raise UsageError(f"{world} has no neighbourhood {args.nbhd}")
        selected = system[args.nbhd]
    sigma = _parse_assignment(args.assign, m, world)
    return _verdict(evaluate(m, EvalPoint(world, selected), sigma, parse_formula(args.formula)), out)


def cmd_resolve(args, out: TextIO) -> int:
    m = _load_model(args.model)
    if args.world:
        if args.world not in m.worlds:
            raise UsageError(f"unknown world {args.world}")
        m = m.with_actual(args.world)
    sigma = _parse_assignment(args.assign, m, m.actual)
    ctx = parse_context(args.context or "")
    return _verdict(resolve(m, sigma, ctx, parse_formula(args.formula)), out)


def cmd_check(args, out: TextIO) -> int:
    d = parse_derivation(_read(args.derivation))
    report = check(d, parse_mode(args.mode))
    if not report.ok:
        out.write("INVALID\n")
        out.write(f"{report.errors[0]}\n")
        return EXIT_NEGATIVE
    out.write("VALID\n")
    out.write(f"conclusion: {report.conclusion}\n")
    for judgement in sorted(str(j) for j in report.open_hypotheses):
        out.write(f"open: {judgement}\n")
    return EXIT_OK


def cmd_normalize(args, out: TextIO) -> int:
    d = parse_derivation(_read(args.derivation))
    report = check(d, parse_mode(args.mode))
    if not report.ok:
        out.write("INVALID\n")
        out.write(f"{report.errors[0]}\n")
        return EXIT_NEGATIVE
    normal, trace = normalize_with_trace(d, budget=args.budget)
    for redex in trace:
        logger.info("contracted %s", redex)
    text = format_derivation(normal)
    if args.output:
        _write(args.output, text)
        out.write(f"NORMALIZED {len(trace)}\n")
    else:
        out.write(text)
    return EXIT_OK


def cmd_countermodel(args, out: TextIO) -> int:
    goal = parse_formula(args.goal)
    hyps = [parse_formula(h) for h in args.hyp]
    premises = [parse_formula(p) for p in args.premise]
    atoms = _atoms_flag(args)
    if atoms is None:
        found = set()
        for f in [goal] + hyps + premises:
            found |= atoms_of(f)
        atoms = sorted(found) or ["p"]
    bounds = _bounds(args, atoms)
    witness = countermodel(hyps, goal, bounds, premises, workers=args.workers or settings.AUDIT_WORKERS)
    if witness is None:
        out.write("NO-COUNTERMODEL-WITHIN-BOUNDS\n")
        return EXIT_OK
    model, _ = witness
    out.write("COUNTERMODEL\n")
    out.write(format_model(model))
    return EXIT_NEGATIVE


def cmd_translate(args, out: TextIO) -> int:
    out.write(format_formula(encode(parse_vformula(args.formula))) + "\n")
    return EXIT_OK


def _rule_name(name: str) -> str:
    if name == CANARY:
        return name
    return RuleId(name).display


def _write_audit(report: AuditReport, out: TextIO) -> None:
    out.write(f"mode: {report.mode.value}\n")
    out.write(f"models: {report.models}\n")
    for entry in report.entries:
        status = "ok" if entry.counterexample is None else "COUNTEREXAMPLE"
        out.write(f"{_rule_name(entry.rule):<16} {entry.checked:>10} {status}\n")
    for entry in report.failures():
        cx = entry.counterexample
        where = cx.point.world if cx.point.selected is None else f"{cx.point.world} with {sorted(cx.point.selected)}"
        out.write(f"\ncounterexample to {_rule_name(entry.rule)} at {where}: {cx.describe()}\n")
        out.write(format_model(cx.model))


def cmd_audit(args, out: TextIO) -> int:
    atoms = _atoms_flag(args) or ["p", "q"]
    report = audit_rules(
        parse_mode(args.mode),
        _bounds(args, atoms),
        workers=args.workers or settings.AUDIT_WORKERS,
        canary=args.canary,
        classical=args.classical,
    )
    _write_audit(report, out)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


# argument parsing

def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", default="ipucv", choices=["ipuc", "ipucv", "ipucv31", "puc"])


def _add_bounds(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-spheres", type=int, default=2)
    p.add_argument("--atoms", help="comma-separated atom names")
    p.add_argument("--non-uniform", action="store_true", help="allow different sphere systems per component")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ipuc", description="Intuitionistic counterfactual logic kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the canonical form of a formula")
    p.add_argument("formula")
    p.set_defaults(handler=cmd_parse)

    for name, handler, text in (
        ("eval", cmd_eval, "evaluate a formula at a point of a model"),
        ("resolve", cmd_resolve, "evaluate a formula under a context at the distinguished world"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("formula")
        p.add_argument("--model", required=True)
        p.add_argument("--world")
        p.add_argument("--assign", help="e.g. w(U)=w1,n(N)=0")
        if name == "eval":
            p.add_argument("--nbhd", type=int, help="index of the selected neighbourhood")
        else:
            p.add_argument("--context", help="e.g. '@,*'")
        p.set_defaults(handler=handler)

    p = sub.add_parser("check", help="check a derivation file")
    p.add_argument("derivation")
    _add_mode(p)
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("normalize", help="normalize a derivation file")
    p.add_argument("derivation")
    p.add_argument("--output")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    _add_mode(p)
    p.set_defaults(handler=cmd_normalize)

    p = sub.add_parser("countermodel", help="search for a finite countermodel")
    p.add_argument("--goal", required=True)
    p.add_argument("--hyp", action="append", default=[], help="local hypothesis, repeatable")
    p.add_argument("--premise", action="append", default=[], help="global premise, repeatable")
    _add_bounds(p)
    p.set_defaults(handler=cmd_countermodel)

    p = sub.add_parser("translate", help="encode a conditional formula")
    p.add_argument("formula")
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser("audit", help="check every rule against all models within bounds")
    _add_mode(p)
    _add_bounds(p)
    p.add_argument("--canary", action="store_true", help="also audit an unsound variant of ImpE")
    p.add_argument("--classical", action="store_true", help="read accessibility as identity")
    p.set_defaults(handler=cmd_audit)

    return parser


def run(argv: Sequence[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    Run one subcommand.

    Args:
        argv: Arguments without the program name.
        out: Result stream, stdout by default.
        err: Diagnostic stream, stderr by default.

    Returns:
        The exit code.
    """
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.handler(args, out)
    except (KernelError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        err.write(f"error: {e}\n")
        return EXIT_USAGE


def main() -> None:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
