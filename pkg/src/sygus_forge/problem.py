"""Synthesis conjectures: find ``f`` such that the property holds for all inputs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import terms as T
from .grammar import GrammarSpec, ProgramTerm
from .terms import Sort, Term


@dataclass(frozen=True)
class Conjecture:
    fun_name: str
    params: tuple[tuple[str, Sort], ...]
    fun_result_sort: Sort
    input_vars: tuple[tuple[str, Sort], ...]
    property: Term
    grammar: GrammarSpec | None = None

    def __post_init__(self):
        if self.property.sort is not Sort.BOOL:
            raise T.SortMismatch("property must be Bool-sorted")
        arity = len(self.params)
        for c in T.calls(self.property):
            if c.name == self.fun_name and len(c.args) != arity:
                raise T.SortMismatch(f"{self.fun_name} applied to {len(c.args)} arguments")

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.params)

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.input_vars)

    @property
    def single_invocation(self) -> bool:
        return detect_single_invocation(self)

    def instantiate(self, body: Term) -> Term:
        """The property with ``f`` replaced by ``lambda params. body``."""
        return T.instantiate_function(self.property, self.fun_name, self.param_names, body)


def detect_single_invocation(c: Conjecture) -> bool:
    """True iff every call of the synthesized function is ``f(input_vars)`` verbatim."""
    expected = tuple(T.Var(n, s) for n, s in c.input_vars)
    for call in T.calls(c.property):
        if call.name == c.fun_name and call.args != expected:
            return False
    return True


@dataclass
class Round:
    candidate: Term
    program: ProgramTerm | None
    size: int | None
    counterexample: dict[str, Any] | None
    model: dict[str, Any] = field(default_factory=dict)


@dataclass
class Outcome:
    """Result of a synthesis run.

    ``verdict`` is ``"solution"``, ``"infeasible"`` or ``"unknown"``.
    """

    verdict: str
    solution: Term | None = None
    program: ProgramTerm | None = None
    reason: str | None = None
    trace: list[Round] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def rounds(self) -> int:
        return len(self.trace)
