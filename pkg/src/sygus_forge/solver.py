"""Mode selection between grammar enumeration and single-invocation solving."""

from __future__ import annotations

import logging

from .cegis import DEFAULT_ROUNDS, synthesize_cegis
from .lia import DEFAULT_BUDGET
from .problem import Conjecture, Outcome, detect_single_invocation
from .single_invocation import (
    DEFAULT_SI_ROUNDS,
    PoolPolicy,
    PropertyNotExpressible,
    solve_si_syntax_guided,
    solve_single_invocation,
)

logger = logging.getLogger(__name__)

MODES = ("auto", "cegis", "si")


def select_mode(c: Conjecture) -> str:
    """``si`` for single-invocation conjectures whose grammar (if any) has ite, else ``cegis``."""
    if detect_single_invocation(c) and (c.grammar is None or c.grammar.ite_capable):
        return "si"
    return "cegis"


def solve(
    c: Conjecture,
    mode: str = "auto",
    max_size: int = 8,
    rounds: int | None = None,
    simplify: bool = True,
    prune: bool = False,
    budget: int = DEFAULT_BUDGET,
    policy: PoolPolicy = PoolPolicy.INPUT_VARS_THEN_CONSTANT,
    backend: str | None = None,
) -> Outcome:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    chosen = select_mode(c) if mode == "auto" else mode

    def cegis() -> Outcome:
        return synthesize_cegis(
            c,
            max_size=max_size,
            rounds=rounds or DEFAULT_ROUNDS,
            prune=prune,
            simplify=simplify,
            budget=budget,
            backend=backend,
        )

    if chosen == "cegis":
        out = cegis()
        out.stats["selected"] = "cegis"
        return out
    si_rounds = rounds or DEFAULT_SI_ROUNDS
    try:
        if c.grammar is None:
            out = solve_single_invocation(c, policy, si_rounds, simplify, budget)
        else:
            out = solve_si_syntax_guided(c, si_rounds, simplify, budget)
    except PropertyNotExpressible:
        if mode != "auto":
            raise
        logger.info("property not expressible in the grammar; falling back to enumeration")
        out = cegis()
        out.stats["selected"] = "cegis"
        out.stats["fallback"] = "property not expressible"
        return out
    if mode == "auto" and out.verdict == "unknown":
        logger.info("single-invocation loop gave up (%s); falling back to enumeration", out.reason)
        first = out
        out = cegis()
        out.stats["selected"] = "cegis"
        out.stats["fallback"] = f"si: {first.reason}"
        return out
    out.stats["selected"] = "si"
    return out
