"""Independent checks that a solution satisfies its conjecture."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import terms as T
from .lia import DEFAULT_BUDGET, ResourceLimit, check_sat
from .problem import Conjecture
from .terms import Sort, Term


@dataclass(frozen=True)
class Verdict:
    status: str  # "valid" | "invalid" | "unknown"
    counterexample: dict | None = None

    @property
    def valid(self) -> bool:
        return self.status == "valid"


def verify(solution: Term, c: Conjecture, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Valid iff the negated property, with ``f`` bound to ``solution``, is unsat."""
    stray = set(T.free_vars(solution)) - set(c.param_names)
    if stray:
        raise ValueError(f"solution mentions non-parameters {sorted(stray)}")
    try:
        res = check_sat(T.not_(c.instantiate(solution)), budget=budget)
    except ResourceLimit:
        return Verdict("unknown")
    if res.sat:
        return Verdict("invalid", res.model)
    return Verdict("valid")


def grid_check(solution: Term, c: Conjecture, radius: int) -> Verdict:
    """Evaluate the property at every integer point of [-radius, radius]^n."""
    if any(s is not Sort.INT for _, s in c.input_vars):
        raise ValueError("grid_check needs Int inputs")
    names = c.input_names
    params = c.param_names

    def fun(name, args):
        return T.evaluate(solution, dict(zip(params, args)))

    axis = range(-radius, radius + 1)
    for point in itertools.product(axis, repeat=len(names)):
        a = dict(zip(names, point))
        if not T.evaluate(c.property, a, fun):
            return Verdict("invalid", a)
    return Verdict("valid")
