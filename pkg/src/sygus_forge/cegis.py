"""Counterexample-guided synthesis over a grammar.

Alternates two steps until one of them fails:

1. pick the next program (in size order) that satisfies the property at
   every stored counterexample point;
2. ask the LIA solver for an input falsifying the property for that program
   and store it.

If step 2 finds nothing the program is a solution. If step 1 runs out of a
finite program space the conjecture has no solution in the grammar.
"""

from __future__ import annotations

import logging
import time
from typing import Callable, Hashable

from . import kernel
from . import terms as T
from .enumerator import Enumerator, Stop
from .grammar import GrammarSpec, ProgramTerm, default_grammar, denote, eval_program, size
from .lia import DEFAULT_BUDGET, InternalError, ResourceLimit, check_sat
from .problem import Conjecture, Outcome, Round, detect_single_invocation
from .terms import Sort, Value
from .verifier import verify

logger = logging.getLogger(__name__)

DEFAULT_ROUNDS = 500


class CounterexampleStore:
    """Points refuting earlier candidates, kept in the kernel's flat layout."""

    def __init__(self, c: Conjecture, grammar: GrammarSpec, backend: str | None = None):
        self.conjecture = c
        self.grammar = grammar
        self.backend = backend
        self.points: list[dict[str, Value]] = []
        self.matrix = kernel.PointMatrix(c.input_names)
        index = {n: i for i, n in enumerate(c.input_names)}
        self.prop_code = kernel.compile_term(c.property, index, c.fun_name)
        self.param_index = {n: i for i, n in enumerate(c.param_names)}
        self.epoch = 0
        # signature = outputs at the points, valid only when f is called on the inputs verbatim
        self._keyed = detect_single_invocation(c) and len(c.params) == len(c.input_vars) > 0

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return point in self.points

    def holds_at(self, p: ProgramTerm, point) -> bool:
        params = self.conjecture.param_names

        def fun(name, args):
            return eval_program(p, self.grammar, dict(zip(params, args)))

        return bool(T.evaluate(self.conjecture.property, point, fun))

    def add(self, point: dict[str, Value], refuted: ProgramTerm) -> None:
        if point in self.points:
            raise InternalError(f"counterexample {point} already stored")
        if self.holds_at(refuted, point):
            raise InternalError(f"point {point} does not refute {refuted}")
        self.points.append(point)
        self.matrix.append(point)
        self.epoch += 1

    def passes(self, p: ProgramTerm) -> bool:
        code = kernel.compile_program(p, self.grammar, self.param_index)
        return kernel.first_failure(self.prop_code, code, self.matrix, self.backend) == -1

    def signature(self, p: ProgramTerm) -> Hashable | None:
        if not self._keyed:
            return None
        code = kernel.compile_program(p, self.grammar, self.param_index)
        return tuple(kernel.run_many(code, self.matrix, self.backend))


def _default_value(sort: Sort) -> Value:
    return False if sort is Sort.BOOL else 0


def find_counterexample(
    c: Conjecture, candidate: ProgramTerm, grammar: GrammarSpec, budget: int = DEFAULT_BUDGET
) -> dict[str, Value] | None:
    """An input point where ``candidate`` violates the property, or None if it is a solution."""
    res = check_sat(T.not_(c.instantiate(denote(candidate, grammar))), budget=budget)
    if not res.sat:
        return None
    return {n: res.model.get(n, _default_value(s)) for n, s in c.input_vars}


def synthesize_cegis(
    c: Conjecture,
    max_size: int = 8,
    rounds: int = DEFAULT_ROUNDS,
    prune: bool = False,
    simplify: bool = True,
    budget: int = DEFAULT_BUDGET,
    backend: str | None = None,
    on_round: Callable[[ProgramTerm, int, str], None] | None = None,
    on_visit: Callable[[ProgramTerm, int], None] | None = None,
) -> Outcome:
    grammar = c.grammar or default_grammar(c.params, c.fun_result_sort)
    if grammar.result_sort is not c.fun_result_sort:
        raise T.SortMismatch("grammar start sort differs from the function's result sort")
    store = CounterexampleStore(c, grammar, backend)
    enum = Enumerator(grammar, max_size=max_size, prune=prune, on_visit=on_visit)
    out = Outcome("unknown", stats={"mode": "cegis", "backend": backend or kernel.BACKEND})
    started = time.perf_counter()

    def finish(verdict: str, **kw) -> Outcome:
        out.verdict = verdict
        for k, v in kw.items():
            setattr(out, k, v)
        out.stats.update(
            rounds=len(out.trace),
            peak_size=max((r.size for r in out.trace), default=0),
            layer_counts=dict(enum.layer_counts),
            pruned=enum.pruned,
            examined=enum.examined,
            seconds=time.perf_counter() - started,
        )
        return out

    while True:
        if len(out.trace) >= rounds:
            return finish("unknown", reason="round limit")
        p = enum.next_candidate(store)
        if p is Stop.EXHAUSTED:
            return finish("infeasible")
        if p is Stop.CAP_REACHED:
            return finish("unknown", reason="size cap")
        k = size(p)
        body = denote(p, grammar)
        try:
            cex = find_counterexample(c, p, grammar, budget)
        except ResourceLimit:
            return finish("unknown", reason="resource limit")
        out.trace.append(Round(body, p, k, cex))
        logger.debug("round %d: %s (size %d) -> %s", len(out.trace), p, k, cex)
        if cex is None:
            if on_round is not None:
                on_round(p, k, "solution")
            solution = T.simplify(body) if simplify else body
            check = verify(solution, c, budget)
            if check.status == "invalid":
                raise InternalError(f"solution {solution} failed verification: {check}")
            if check.status == "unknown":
                return finish("unknown", reason="verification resource limit")
            return finish("solution", solution=solution, program=p)
        if on_round is not None:
            on_round(p, k, "refuted")
        store.add(cex, p)
