"""Synthesis for single-invocation properties by refutation.

When every call of ``f`` is ``f(x1..xn)`` the property can be read as a
first-order formula ``Q(g, x)`` in a fresh output variable ``g``. The loop
collects output terms ``t1..tn`` until ``not Q(t1, x) and ... and not Q(tn, x)``
is unsatisfiable; the answer is then the ite-chain that returns the first
``ti`` satisfying ``Q``, falling back to ``tn``.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

from . import terms as T
from .enumerator import Layers
from .grammar import (
    ConstDenotation,
    GrammarSpec,
    ProgramTerm,
    VarDenotation,
    denote,
    eval_program,
    express,
    is_ground,
)
from .lia import DEFAULT_BUDGET, InternalError, ResourceLimit, check_sat
from .problem import Conjecture, Outcome, Round, detect_single_invocation
from .terms import Sort, Term
from .verifier import verify

DEFAULT_SI_ROUNDS = 64


class SynthesisError(Exception):
    pass


class NotSingleInvocation(SynthesisError):
    pass


class GrammarNotIteCapable(SynthesisError):
    pass


class PropertyNotExpressible(SynthesisError):
    pass


class PreconditionViolated(SynthesisError):
    pass


class PoolPolicy(enum.Enum):
    INPUT_VARS_THEN_CONSTANT = "input-vars-then-constant"
    CONSTANT_ONLY = "constant-only"


def _fresh(base: str, taken) -> str:
    name, i = base, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    return name


@dataclass
class SIState:
    skolems: tuple[tuple[str, Sort], ...]
    Q: Term
    g: T.Var
    instantiation_terms: list[Term]
    pool_policy: PoolPolicy = PoolPolicy.INPUT_VARS_THEN_CONSTANT

    def at(self, t: Term) -> Term:
        return T.substitute(self.Q, {self.g.name: t})


def si_state(c: Conjecture, policy: PoolPolicy = PoolPolicy.INPUT_VARS_THEN_CONSTANT) -> SIState:
    """Read the property as ``Q(g, params)``, with inputs renamed to the parameters."""
    if not detect_single_invocation(c):
        raise NotSingleInvocation(f"{c.fun_name} is not always applied to {c.input_names}")
    taken = set(c.input_names) | set(c.param_names) | set(T.free_vars(c.property))
    g = T.Var(_fresh("g", taken), c.fun_result_sort)
    Q = T.replace_calls(c.property, c.fun_name, g)
    rename = {i: T.Var(p, s) for (i, _), (p, s) in zip(c.input_vars, c.params)}
    Q = T.substitute(Q, rename)
    return SIState(c.params, Q, g, [], policy)


@dataclass(frozen=True)
class IteChain:
    guards: tuple[tuple[Term, Term], ...]
    default: Term

    def render(self) -> Term:
        out = self.default
        for guard, value in reversed(self.guards):
            out = T.ite(guard, value, out)
        return out


def _refutes_all(st: SIState, ts, budget: int) -> bool:
    return not check_sat(T.conj([T.not_(st.at(t)) for t in ts]), budget=budget).sat


def build_ite_chain(st: SIState, ts=None, budget: int = DEFAULT_BUDGET, check: bool = True) -> IteChain:
    """ite(Q(t1), t1, ite(Q(t2), t2, ... tn)), valid when the negated instances are jointly unsat."""
    ts = list(st.instantiation_terms if ts is None else ts)
    if not ts:
        raise PreconditionViolated("no instantiation terms")
    if check and not _refutes_all(st, ts, budget):
        raise PreconditionViolated("negated instances are jointly satisfiable")
    return IteChain(tuple((st.at(t), t) for t in ts[:-1]), ts[-1])


def _constant(value, sort: Sort) -> Term:
    return T.BoolConst(bool(value)) if sort is Sort.BOOL else T.IntConst(value)


def _choose_plain(st: SIState, model, value):
    if st.pool_policy is PoolPolicy.INPUT_VARS_THEN_CONSTANT:
        for name, sort in st.skolems:
            v = T.Var(name, sort)
            if sort is st.g.sort and model.get(name) == value and v not in st.instantiation_terms:
                return v
    t = _constant(value, st.g.sort)
    return t if t not in st.instantiation_terms else None


class _GrammarPool:
    """Instantiation terms drawn from a grammar: variables, then numerals, then larger programs."""

    def __init__(self, grammar: GrammarSpec, depth: int):
        self.grammar = grammar
        self.depth = depth
        self.layers = Layers(grammar)
        nullary = grammar.nullary()
        self.nullary = [c for c in nullary if isinstance(c.denotation, VarDenotation)] + [
            c for c in nullary if isinstance(c.denotation, ConstDenotation)
        ]

    def choose(self, model, value, used):
        g = self.grammar
        for c in self.nullary:
            p = ProgramTerm(c.name, (), g.start)
            t = denote(p, g)
            if t not in used and eval_program(p, g, model) == value:
                return p, t
        for k in range(1, self.depth + 1):
            ground = None
            for p in self.layers.stream(g.start, k):
                if eval_program(p, g, model) != value:
                    continue
                t = denote(p, g)
                if t in used:
                    continue
                if not is_ground(p, g):
                    return p, t
                if ground is None:
                    ground = (p, t)
            if ground is not None:
                return ground
        return None


def _run(
    c: Conjecture,
    st: SIState,
    rounds: int,
    simplify: bool,
    budget: int,
    choose,
    mode: str,
) -> tuple[Outcome, IteChain | None]:
    taken = {n for n, _ in st.skolems} | {st.g.name}
    e = T.Var(_fresh("e", taken), st.g.sort)
    base = st.at(e)
    out = Outcome("unknown", stats={"mode": mode, "pool": st.pool_policy.value})
    started = time.perf_counter()

    def finish(verdict, chain=None, **kw):
        out.verdict = verdict
        for k, v in kw.items():
            setattr(out, k, v)
        out.stats.update(rounds=len(out.trace), seconds=time.perf_counter() - started)
        return out, chain

    try:
        while True:
            ts = st.instantiation_terms
            res = check_sat(T.conj([base] + [T.not_(st.at(t)) for t in ts]), budget=budget)
            if not res.sat:
                if ts and _refutes_all(st, ts, budget):
                    chain = build_ite_chain(st, check=False)
                    rendered = chain.render()
                    solution = T.simplify(rendered) if simplify else rendered
                    check = verify(solution, c, budget)
                    if check.status == "invalid":
                        raise InternalError(f"ite-chain {rendered} failed verification")
                    if check.status == "unknown":
                        return finish("unknown", reason="verification resource limit")
                    return finish("solution", chain, solution=solution)
                return finish("infeasible")
            if len(ts) >= rounds:
                return finish("unknown", reason="round limit")
            model = res.model
            value = model.get(e.name, False if e.sort is Sort.BOOL else 0)
            picked = choose(model, value)
            if picked is None:
                return finish("unknown", reason="instantiation pool exhausted")
            program, t = picked
            ts.append(t)
            shown = {k: v for k, v in model.items() if k != e.name}
            shown["e"] = value
            out.trace.append(Round(t, program, None, None, model=shown))
    except ResourceLimit:
        return finish("unknown", reason="resource limit")


def solve_single_invocation(
    c: Conjecture,
    policy: PoolPolicy = PoolPolicy.INPUT_VARS_THEN_CONSTANT,
    rounds: int = DEFAULT_SI_ROUNDS,
    simplify: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> Outcome:
    """Instantiation loop without a grammar; the pool is skolems, then the model's constant."""
    st = si_state(c, policy)

    def choose(model, value):
        t = _choose_plain(st, model, value)
        return None if t is None else (None, t)

    outcome, _ = _run(c, st, rounds, simplify, budget, choose, "si")
    return outcome


def check_si_grammar(c: Conjecture, st: SIState) -> GrammarSpec:
    g = c.grammar
    if g is None or not g.ite_capable:
        raise GrammarNotIteCapable("start datatype has no ite constructor")
    hole = ProgramTerm("?", (), g.start)
    if express(st.Q, g, g.condition_datatype, {st.g.name: hole}) is None:
        raise PropertyNotExpressible(
            f"property is not a term of {g.condition_datatype}: {st.Q}"
        )
    return g


def solve_si_syntax_guided(
    c: Conjecture,
    rounds: int = DEFAULT_SI_ROUNDS,
    simplify: bool = True,
    budget: int = DEFAULT_BUDGET,
    pool_depth: int = 3,
) -> Outcome:
    """Instantiation loop whose terms come from the grammar; conditions are never enumerated.

    The solution carries both the simplified builtin term and a grammar
    program for the unsimplified chain.
    """
    st = si_state(c)
    g = check_si_grammar(c, st)
    pool = _GrammarPool(g, pool_depth)

    def choose(model, value):
        return pool.choose(model, value, st.instantiation_terms)

    outcome, chain = _run(c, st, rounds, simplify, budget, choose, "si-grammar")
    if chain is not None:
        program = express(chain.render(), g, g.start)
        if program is None:
            raise InternalError("ite-chain has no grammar preimage")
        outcome.program = program
    return outcome
