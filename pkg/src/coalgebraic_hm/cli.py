"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 a check found a
disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import conformance as cf
from .conformance import Conformance
from .determinization import DEFAULT_DEPTH_CAP, reachable_closure
from .fixpoint import (
    bisim_metric,
    bisimilarity,
    egli_milner_gfp,
    simulation_distance,
    trace_distance,
    trace_equivalence,
)
from .harness import DEFAULT_SEED, hm_check_boolean_branching, hm_check_linear
from .laws import coclosure_failures, galois_failures, quantale_law_failures
from .lifting import default_spec
from .logic import eval_branching, eval_em, eval_em_on_element, parse_formula
from .quantale import BOOL, INTERVAL, Kind
from .systems import (
    FuzzyLts,
    Lts,
    MarkovTerm,
    ProbAutomaton,
    UnlabelledTs,
    format_element,
    load_system,
    parse_element,
    unit_element,
)


class UsageError(Exception):
    pass


def _fmt(v, decimal=None) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Fraction):
        s = str(v)
        if decimal is not None and v.denominator != 1:
            s += f" (~{float(v):.{decimal}f})"
        return s
    return str(v)


def _state(system, name) -> int:
    try:
        return system.states.index(name)
    except ValueError:
        raise UsageError(f"unknown state {name!r}") from None


def _matrix_text(system, d: Conformance, decimal) -> str:
    names = system.states
    cells = [[_fmt(d(i, j), decimal) for j in range(d.n)] for i in range(d.n)]
    width = max([len(s) for s in names] + [len(c) for row in cells for c in row])
    lines = [" " * width + " " + " ".join(s.rjust(width) for s in names)]
    for name, row in zip(names, cells):
        lines.append(name.rjust(width) + " " + " ".join(c.rjust(width) for c in row))
    return "\n".join(lines)


def _partition_names(system, d: Conformance):
    return [[system.states[i] for i in block] for block in cf.partition_of(d)]


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


def cmd_bisim(args, system):
    if not isinstance(system, (UnlabelledTs, Lts)):
        raise UsageError("bisim needs an unlabelled or labelled transition system")
    d = bisimilarity(system)
    blocks = _partition_names(system, d)
    payload = {"partition": blocks}
    text = "partition: " + " ".join("{" + ",".join(b) + "}" for b in blocks)
    if args.crosscheck:
        em = egli_milner_gfp(system)
        ok = em.converged and em.result == d
        payload["crosscheck"] = {"agree": ok, "iterations": em.iterations}
        text += f"\nEgli-Milner fixpoint: {'agrees' if ok else 'DISAGREES'} ({em.iterations} iterations)"
        if not ok:
            _emit(args, payload, text)
            return 2
    _emit(args, payload, text)
    return 0


def cmd_metric(args, system):
    if args.directed:
        if not isinstance(system, (UnlabelledTs, Lts, FuzzyLts)):
            raise UsageError("--directed needs an unlabelled, labelled or fuzzy system")
        report = simulation_distance(system, args.iters)
    else:
        if not isinstance(system, MarkovTerm):
            raise UsageError("metric needs a markov-term system (or --directed)")
        report = bisim_metric(system, args.iters)
    payload = report.to_json()
    text = (
        f"converged: {str(report.converged).lower()}  iterations: {report.iterations}"
        f"  ({report.order})\n" + _matrix_text(system, report.result, args.decimal)
    )
    _emit(args, payload, text)
    return 0


def cmd_trace_eq(args, system):
    if not isinstance(system, Lts):
        raise UsageError("trace-eq needs an lts system")
    U, V = parse_element(system, args.left), parse_element(system, args.right)
    verdict = trace_equivalence(system, U, V)
    word = None if verdict.witness is None else ("".join(verdict.witness) or "ε")
    payload = {"equivalent": verdict.equivalent, "witness": word}
    text = "equivalent" if verdict.equivalent else f"inequivalent, witness: {word}"
    _emit(args, payload, text)
    return 0


def cmd_trace_dist(args, system):
    if not isinstance(system, (Lts, ProbAutomaton, FuzzyLts)):
        raise UsageError("trace-dist needs an lts, prob-automaton or fuzzy-lts system")
    t1, t2 = parse_element(system, args.left), parse_element(system, args.right)
    report = trace_distance(system, t1, t2, args.depth)
    payload = report.to_json(_fmt)
    text = f"{_fmt(report.result, args.decimal)}  exact: {str(report.exact).lower()}"
    _emit(args, payload, text)
    return 0


def cmd_eval(args, system):
    dialect = args.dialect
    if dialect is None:
        dialect = "branching" if isinstance(system, (UnlabelledTs, MarkovTerm)) else "em"
    phi = parse_formula(args.formula, dialect, system)
    if args.element is not None:
        if dialect != "em":
            raise UsageError("--element only applies to linear-time formulas")
        value = eval_em_on_element(system, phi, parse_element(system, args.element))
    else:
        if args.state is None:
            raise UsageError("eval needs --state or --element")
        x = _state(system, args.state)
        value = eval_em(system, phi, x) if dialect == "em" else eval_branching(system, phi, x)
    _emit(args, {"formula": str(phi), "value": _fmt(value)}, _fmt(value, args.decimal))
    return 0


def cmd_hm_check(args, system):
    reports = []
    if isinstance(system, UnlabelledTs):
        reports.append(("", hm_check_boolean_branching(system)))
    elif isinstance(system, (Lts, ProbAutomaton, FuzzyLts)):
        if (args.left is None) != (args.right is None):
            raise UsageError("give both --left and --right, or neither")
        if args.left is not None:
            pairs = [(parse_element(system, args.left), parse_element(system, args.right))]
        else:
            units = [unit_element(system, x) for x in range(system.n)]
            symmetric = default_spec(system).kind is Kind.SYMMETRIC
            pairs = [(a, b) for i, a in enumerate(units) for j, b in enumerate(units) if (i < j if symmetric else i != j)]
        for t1, t2 in pairs:
            label = f"{format_element(system, t1)} vs {format_element(system, t2)}"
            reports.append((label, hm_check_linear(system, t1, t2, args.depth)))
    else:
        raise UsageError("hm-check needs an unlabelled, lts, prob-automaton or fuzzy-lts system")
    ok = all(r.verdict for _, r in reports)
    payload = {
        "seed": args.seed,
        "verdict": ok,
        "reports": [dict(r.to_json(_fmt), pair=label) for label, r in reports],
    }
    lines = [f"seed: {args.seed}"]
    for label, r in reports:
        lines.append(f"{label or r.check}: {'agree' if r.verdict else 'DISAGREE'}")
        if r.counterexample:
            lines.append(f"  counterexample: {r.counterexample}")
        for rec in r.records:
            lines.append(
                f"  n={rec.depth} logic={_fmt(rec.logical)} behaviour={_fmt(rec.behaviour)} oracle={_fmt(rec.oracle)}"
            )
    _emit(args, payload, "\n".join(lines))
    return 0 if ok else 2


def cmd_selftest(args):
    rng = random.Random(args.seed)
    results = {
        "quantale-boolean": quantale_law_failures(BOOL, rng),
        "quantale-interval": quantale_law_failures(INTERVAL, rng, args.samples),
        "galois": galois_failures(rng, max(args.samples // 10, 100)),
        "coclosure": coclosure_failures(5),
    }
    ok = not any(results.values())
    payload = {"seed": args.seed, "verdict": ok, "failures": results}
    text = "\n".join(
        f"{name}: {'ok' if not bad else f'{len(bad)} failures, first: {bad[0]}'}" for name, bad in results.items()
    )
    _emit(args, payload, f"seed: {args.seed}\n" + text)
    return 0 if ok else 2


def _add_common(p, defaults: bool):
    kw = (lambda d: {"default": d}) if defaults else (lambda d: {"default": argparse.SUPPRESS})
    p.add_argument("--format", choices=("text", "json"), **kw("text"))
    p.add_argument("--decimal", type=int, metavar="K", help="also show values rounded to K places", **kw(None))
    p.add_argument("--dump-graph", action="store_true", help="print the determinized graph (debug)", **kw(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coalgebraic-hm", description=__doc__)
    _add_common(p, True)
    # the common flags are accepted after the subcommand too
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, False)
    sub = p.add_subparsers(dest="command", required=True)
    _add_parser = sub.add_parser
    sub.add_parser = lambda *a, **k: _add_parser(*a, parents=[common], **k)

    s = sub.add_parser("bisim", help="bisimilarity partition")
    s.add_argument("file")
    s.add_argument("--crosscheck", action="store_true")

    s = sub.add_parser("metric", help="bisimulation metric or directed simulation distance")
    s.add_argument("file")
    s.add_argument("--iters", type=int, default=1000)
    s.add_argument("--directed", action="store_true")

    s = sub.add_parser("trace-eq", help="trace equivalence of two state sets")
    s.add_argument("file")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)

    s = sub.add_parser("trace-dist", help="trace distance of two monad elements")
    s.add_argument("file")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--depth", type=int, default=DEFAULT_DEPTH_CAP)

    s = sub.add_parser("eval", help="evaluate a formula")
    s.add_argument("file")
    s.add_argument("--formula", required=True)
    s.add_argument("--state")
    s.add_argument("--element")
    s.add_argument("--dialect", choices=("em", "branching"))

    s = sub.add_parser("hm-check", help="compare logic, behaviour and brute force")
    s.add_argument("file")
    s.add_argument("--depth", type=int, default=4)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--left")
    s.add_argument("--right")

    s = sub.add_parser("selftest", help="quantale and Galois law suites")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--samples", type=int, default=10_000)
    return p


COMMANDS = {
    "bisim": cmd_bisim,
    "metric": cmd_metric,
    "trace-eq": cmd_trace_eq,
    "trace-dist": cmd_trace_dist,
    "eval": cmd_eval,
    "hm-check": cmd_hm_check,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.command == "selftest":
            return cmd_selftest(args)
        system = load_system(args.file)
        if args.dump_graph and isinstance(system, (Lts, ProbAutomaton, FuzzyLts)):
            graph = reachable_closure(system, [unit_element(system, x) for x in range(system.n)])
            print(graph.dump(), file=sys.stderr)
        return COMMANDS[args.command](args, system)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
