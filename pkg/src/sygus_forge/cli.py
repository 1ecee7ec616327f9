"""Command-line driver: ``sygus-forge PROBLEM.sl``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import TextIO

from . import terms as T
from .frontend import ProblemError, parse, print_solution
from .lia import InternalError
from .problem import Outcome
from .single_invocation import SynthesisError
from .solver import MODES, solve

EXIT_SOLUTION = 0
EXIT_INFEASIBLE = 1
EXIT_UNKNOWN = 2
EXIT_PARSE = 3
EXIT_INTERNAL = 4

logger = logging.getLogger("sygus_forge")


def _fmt_point(point: dict, rename: dict | None = None) -> str:
    rename = rename or {}
    items = ", ".join(f"{rename.get(k, k)} -> {_fmt_value(v)}" for k, v in point.items())
    return "{" + items + "}"


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _table(rows: list[tuple[str, ...]], header: tuple[str, ...]) -> str:
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    line = lambda r: " | ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
    rule = "-+-".join("-" * w for w in widths)
    return "\n".join([line(header), rule, *map(line, rows)])


def cegis_table(out: Outcome, input_names: tuple[str, ...]) -> str:
    """Round table: candidate models, refuting points, and the clauses they add."""
    rows = []
    for i, r in enumerate(out.trace, 1):
        fresh = [f"{n}{i}" for n in input_names]
        cand = T.to_sexpr(r.candidate)
        rows.append(("1", f"{{e -> {cand}}}", f"not P({', '.join([cand, *fresh])})"))
        if r.counterexample is None:
            rows.append(("2", "none", ""))
        else:
            vals = [_fmt_value(r.counterexample[n]) for n in input_names]
            model = _fmt_point(dict(zip(fresh, (r.counterexample[n] for n in input_names))))
            rows.append(("2", model, f"G => P({', '.join(['e', *vals])})"))
    return _table(rows, ("Step", "Model", "Added Clause"))


def si_table(out: Outcome, param_names: tuple[str, ...]) -> str:
    """Round table: model, chosen instantiation term, and the clause it adds."""
    skolem = {n: f"k{i}" for i, n in enumerate(param_names, 1)}
    ks = ", ".join(skolem.values())
    rows = []
    for r in out.trace:
        fv = T.free_vars(r.candidate)
        renamed = T.substitute(r.candidate, {n: T.Var(skolem[n], s) for n, s in fv.items() if n in skolem})
        choice = T.to_sexpr(renamed)
        rows.append((_fmt_point(r.model, skolem), choice, f"not Q({choice}, {ks})"))
    if out.verdict == "solution":
        rows.append(("none", "", ""))
    return _table(rows, ("Model", "Choice of t", "Added Clause"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sygus-forge",
        description="Synthesize a function from a SyGuS-style LIA problem file.",
    )
    p.add_argument("problem", help="problem file")
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--max-size", type=int, default=8, help="largest program size enumerated")
    p.add_argument("--rounds", type=int, default=None, help="round limit (default 500 cegis / 64 si)")
    simp = p.add_mutually_exclusive_group()
    simp.add_argument("--simplify", dest="simplify", action="store_true", default=True)
    simp.add_argument("--no-simplify", dest="simplify", action="store_false")
    p.add_argument("--prune", action="store_true", help="observational-equivalence pruning")
    p.add_argument("--trace", action="store_true", help="print the round table to stderr")
    p.add_argument("--stats", action="store_true", help="print run statistics to stderr")
    p.add_argument("--seed", type=int, default=None, help="accepted and ignored")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    if args.seed is not None:
        print("warning: --seed is ignored; the engine is deterministic", file=stderr)
    try:
        with open(args.problem, encoding="utf-8") as fh:
            problem = parse(fh.read())
    except OSError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_PARSE
    except ProblemError as e:
        print(f"{args.problem}:{e}", file=stderr)
        return EXIT_PARSE
    c = problem.conjecture()
    try:
        out = solve(
            c,
            mode=args.mode,
            max_size=args.max_size,
            rounds=args.rounds,
            simplify=args.simplify,
            prune=args.prune,
        )
    except SynthesisError as e:
        print("unknown", file=stdout)
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        return EXIT_UNKNOWN
    except InternalError as e:
        print(f"internal consistency failure: {e}", file=stderr)
        return EXIT_INTERNAL
    if args.trace:
        if out.stats.get("mode") == "cegis":
            print(cegis_table(out, c.input_names), file=stderr)
        else:
            print(si_table(out, c.param_names), file=stderr)
    if args.stats:
        for key in ("selected", "mode", "fallback", "rounds", "examined", "peak_size", "pruned", "backend", "seconds"):
            if key in out.stats:
                print(f"{key}: {out.stats[key]}", file=stderr)
    if out.verdict == "solution":
        print(print_solution(problem, out.solution), file=stdout)
        return EXIT_SOLUTION
    if out.verdict == "infeasible":
        print("infeasible", file=stdout)
        return EXIT_INFEASIBLE
    print("unknown", file=stdout)
    if out.reason:
        print(f"reason: {out.reason}", file=stderr)
    return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
