"""Grammars as mutually recursive datatypes, and the programs they generate."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Union

from . import terms as T
from .terms import Op, Sort, Term, Value


class GrammarError(Exception):
    pass


@dataclass(frozen=True)
class OpDenotation:
    op: Op


@dataclass(frozen=True)
class VarDenotation:
    name: str


@dataclass(frozen=True)
class ConstDenotation:
    value: int | bool


Denotation = Union[OpDenotation, VarDenotation, ConstDenotation]


@dataclass(frozen=True)
class Constructor:
    name: str
    args: tuple[str, ...]
    denotation: Denotation

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class Datatype:
    name: str
    sort: Sort
    constructors: tuple[Constructor, ...]


@dataclass(frozen=True)
class ProgramTerm:
    constructor: str
    children: tuple["ProgramTerm", ...]
    datatype: str

    def __str__(self) -> str:
        if not self.children:
            return self.constructor
        return "(" + " ".join([self.constructor, *map(str, self.children)]) + ")"


@dataclass(frozen=True)
class GrammarSpec:
    datatypes: tuple[Datatype, ...]
    start: str
    params: tuple[tuple[str, Sort], ...] = field(default=())

    def __post_init__(self):
        names = [d.name for d in self.datatypes]
        if len(set(names)) != len(names):
            raise GrammarError("duplicate datatype name")
        if self.start not in names:
            raise GrammarError(f"start datatype {self.start!r} not declared")
        params = dict(self.params)
        for d in self.datatypes:
            seen = set()
            for c in d.constructors:
                if c.name in seen:
                    raise GrammarError(f"duplicate constructor {c.name!r} in {d.name}")
                seen.add(c.name)
                self._check_constructor(d, c, params)
        for d in self.datatypes:
            if self.least_size(d.name) is None:
                raise GrammarError(f"datatype {d.name} has no finite terms")

    def _check_constructor(self, d: Datatype, c: Constructor, params) -> None:
        for a in c.args:
            if a not in self.by_name:
                raise GrammarError(f"{d.name}.{c.name}: unknown datatype {a!r}")
        den = c.denotation
        if isinstance(den, VarDenotation):
            if c.args:
                raise GrammarError(f"variable constructor {c.name} must be nullary")
            if den.name not in params:
                raise GrammarError(f"{c.name}: {den.name!r} is not a parameter")
            if params[den.name] is not d.sort:
                raise GrammarError(f"{c.name}: variable sort differs from {d.name}")
            return
        if isinstance(den, ConstDenotation):
            if c.args:
                raise GrammarError(f"constant constructor {c.name} must be nullary")
            is_bool = isinstance(den.value, bool)
            if is_bool != (d.sort is Sort.BOOL):
                raise GrammarError(f"{c.name}: constant sort differs from {d.name}")
            return
        if len(c.args) != T.ARITY[den.op]:
            raise GrammarError(f"{d.name}.{c.name}: arity mismatch for {den.op.value}")
        # sort-check the denotation with placeholder children
        dummies = [T.Var("_", self.by_name[a].sort) for a in c.args]
        try:
            built = T.mk(den.op, *dummies)
        except T.SortMismatch as e:
            raise GrammarError(f"{d.name}.{c.name}: {e}") from None
        if built.sort is not d.sort:
            raise GrammarError(f"{d.name}.{c.name}: result sort differs from {d.name}")

    @cached_property
    def by_name(self) -> dict[str, Datatype]:
        return {d.name: d for d in self.datatypes}

    def constructor(self, datatype: str, name: str) -> Constructor:
        for c in self.by_name[datatype].constructors:
            if c.name == name:
                return c
        raise GrammarError(f"no constructor {name!r} in {datatype}")

    @property
    def result_sort(self) -> Sort:
        return self.by_name[self.start].sort

    def least_size(self, datatype: str) -> int | None:
        return self._least_sizes.get(datatype)

    @cached_property
    def _least_sizes(self) -> dict[str, int]:
        best: dict[str, int] = {}
        changed = True
        while changed:
            changed = False
            for d in self.datatypes:
                for c in d.constructors:
                    if all(a in best for a in c.args):
                        s = (1 if c.args else 0) + sum(best[a] for a in c.args)
                        if d.name not in best or s < best[d.name]:
                            best[d.name] = s
                            changed = True
        return best

    def max_program_size(self, datatype: str | None = None) -> int | None:
        """Largest program size in ``datatype``, or None when unbounded."""
        return self._max_sizes.get(datatype or self.start)

    @cached_property
    def _max_sizes(self) -> dict[str, int]:
        # a datatype is bounded iff no cycle is reachable through usable constructors
        usable = {
            d.name: [c for c in d.constructors if all(self.least_size(a) is not None for a in c.args)]
            for d in self.datatypes
        }
        out: dict[str, int] = {}
        state: dict[str, int] = {}

        def visit(name: str) -> int | None:
            if state.get(name) == 1:
                return None
            if name in out:
                return out[name]
            if state.get(name) == 2:
                return None
            state[name] = 1
            best = 0
            for c in usable[name]:
                s = 1 if c.args else 0
                for a in c.args:
                    m = visit(a)
                    if m is None:
                        state[name] = 2
                        return None
                    s += m
                best = max(best, s)
            state[name] = 2
            out[name] = best
            return best

        for d in self.datatypes:
            visit(d.name)
        return out

    @cached_property
    def ite_constructor(self) -> Constructor | None:
        """The start datatype's ite constructor, if any, with a Bool condition datatype."""
        for c in self.by_name[self.start].constructors:
            den = c.denotation
            if isinstance(den, OpDenotation) and den.op is Op.ITE:
                if c.args[1] == self.start and c.args[2] == self.start:
                    return c
        return None

    @property
    def ite_capable(self) -> bool:
        return self.ite_constructor is not None

    @property
    def condition_datatype(self) -> str | None:
        c = self.ite_constructor
        return c.args[0] if c is not None else None

    def nullary(self, datatype: str | None = None) -> list[Constructor]:
        return [c for c in self.by_name[datatype or self.start].constructors if not c.args]


def size(p: ProgramTerm) -> int:
    """Number of non-nullary constructor applications in ``p``."""
    if not p.children:
        return 0
    return 1 + sum(size(c) for c in p.children)


def constructor_count(p: ProgramTerm) -> int:
    return 1 + sum(constructor_count(c) for c in p.children)


def is_ground(p: ProgramTerm, g: GrammarSpec) -> bool:
    """True when ``p`` mentions no input variable."""
    den = g.constructor(p.datatype, p.constructor).denotation
    if isinstance(den, VarDenotation):
        return False
    return all(is_ground(c, g) for c in p.children)


def check_program(p: ProgramTerm, g: GrammarSpec) -> None:
    c = g.constructor(p.datatype, p.constructor)
    if len(c.args) != len(p.children):
        raise GrammarError(f"{p.constructor}: expected {len(c.args)} children")
    for a, child in zip(c.args, p.children):
        if child.datatype != a:
            raise GrammarError(f"{p.constructor}: child of {child.datatype}, expected {a}")
        check_program(child, g)


def denote(p: ProgramTerm, g: GrammarSpec) -> Term:
    """The builtin term a program stands for, one node per constructor."""
    dt = g.by_name[p.datatype]
    den = g.constructor(p.datatype, p.constructor).denotation
    if isinstance(den, VarDenotation):
        return T.Var(den.name, dt.sort)
    if isinstance(den, ConstDenotation):
        if isinstance(den.value, bool):
            return T.BoolConst(den.value)
        return T.IntConst(den.value)
    return T.App(den.op, tuple(denote(c, g) for c in p.children))


class VisitCounter:
    def __init__(self):
        self.count = 0


def eval_program(
    p: ProgramTerm,
    g: GrammarSpec,
    inputs: Mapping[str, Value],
    counter: VisitCounter | None = None,
) -> Value:
    """Run ``p`` on ``inputs`` directly, without building its denotation."""
    if counter is not None:
        counter.count += 1
    den = g.constructor(p.datatype, p.constructor).denotation
    if isinstance(den, VarDenotation):
        try:
            return inputs[den.name]
        except KeyError:
            raise T.UnboundVariable(den.name) from None
    if isinstance(den, ConstDenotation):
        return den.value
    op = den.op
    ch = p.children
    if op is Op.ITE:
        if eval_program(ch[0], g, inputs, counter):
            return eval_program(ch[1], g, inputs, counter)
        return eval_program(ch[2], g, inputs, counter)
    if op is Op.NOT:
        return not eval_program(ch[0], g, inputs, counter)
    if op is Op.AND:
        return eval_program(ch[0], g, inputs, counter) and eval_program(ch[1], g, inputs, counter)
    if op is Op.OR:
        return eval_program(ch[0], g, inputs, counter) or eval_program(ch[1], g, inputs, counter)
    x = eval_program(ch[0], g, inputs, counter)
    y = eval_program(ch[1], g, inputs, counter)
    if op is Op.ADD:
        return x + y
    if op is Op.SUB:
        return x - y
    if op is Op.LEQ:
        return x <= y
    return x == y


def express(
    t: Term,
    g: GrammarSpec,
    datatype: str,
    holes: Mapping[str, ProgramTerm] | None = None,
) -> ProgramTerm | None:
    """A program of ``datatype`` whose denotation is ``t``, or None.

    Variables listed in ``holes`` stand for the given programs. Constructors
    are tried in declaration order, so the result is deterministic.
    """
    holes = holes or {}
    memo: dict[tuple[Term, str], ProgramTerm | None] = {}

    def go(node: Term, dt: str) -> ProgramTerm | None:
        key = (node, dt)
        if key in memo:
            return memo[key]
        memo[key] = None
        out = None
        if isinstance(node, T.Var) and node.name in holes:
            hole = holes[node.name]
            out = hole if hole.datatype == dt else None
        else:
            for c in g.by_name[dt].constructors:
                out = _match(node, c, dt)
                if out is not None:
                    break
        memo[key] = out
        return out

    def _match(node: Term, c: Constructor, dt: str) -> ProgramTerm | None:
        den = c.denotation
        if isinstance(den, VarDenotation):
            ok = isinstance(node, T.Var) and node.name == den.name
            return ProgramTerm(c.name, (), dt) if ok else None
        if isinstance(den, ConstDenotation):
            if isinstance(den.value, bool):
                ok = isinstance(node, T.BoolConst) and node.value == den.value
            else:
                ok = isinstance(node, T.IntConst) and node.value == den.value
            return ProgramTerm(c.name, (), dt) if ok else None
        if not isinstance(node, T.App) or node.op is not den.op:
            return None
        kids = []
        for sub, adt in zip(node.args, c.args):
            k = go(sub, adt)
            if k is None:
                return None
            kids.append(k)
        return ProgramTerm(c.name, tuple(kids), dt)

    return go(t, datatype)


def default_grammar(params: tuple[tuple[str, Sort], ...], result: Sort) -> GrammarSpec:
    """Linear integer arithmetic over ``params`` with numerals 0 and 1."""
    int_ctors = [Constructor("0", (), ConstDenotation(0)), Constructor("1", (), ConstDenotation(1))]
    bool_ctors = [Constructor("true", (), ConstDenotation(True)), Constructor("false", (), ConstDenotation(False))]
    for name, sort in params:
        target = int_ctors if sort is Sort.INT else bool_ctors
        target.append(Constructor(name, (), VarDenotation(name)))
    int_ctors += [
        Constructor("+", ("Start", "Start"), OpDenotation(Op.ADD)),
        Constructor("-", ("Start", "Start"), OpDenotation(Op.SUB)),
        Constructor("ite", ("StartBool", "Start", "Start"), OpDenotation(Op.ITE)),
    ]
    bool_ctors += [
        Constructor("<=", ("Start", "Start"), OpDenotation(Op.LEQ)),
        Constructor("=", ("Start", "Start"), OpDenotation(Op.EQ)),
        Constructor("and", ("StartBool", "StartBool"), OpDenotation(Op.AND)),
        Constructor("or", ("StartBool", "StartBool"), OpDenotation(Op.OR)),
        Constructor("not", ("StartBool",), OpDenotation(Op.NOT)),
    ]
    if result is Sort.BOOL:
        bool_ctors.append(Constructor("ite", ("StartBool", "StartBool", "StartBool"), OpDenotation(Op.ITE)))
        dts = (Datatype("StartBool", Sort.BOOL, tuple(bool_ctors)), Datatype("Start", Sort.INT, tuple(int_ctors)))
        return GrammarSpec(dts, "StartBool", params)
    dts = (Datatype("Start", Sort.INT, tuple(int_ctors)), Datatype("StartBool", Sort.BOOL, tuple(bool_ctors)))
    return GrammarSpec(dts, "Start", params)


def example_grammar(x: str = "x", y: str = "y") -> GrammarSpec:
    """The two-variable max grammar: S over 0, 1, x, y, +, -, ite and C over comparisons."""
    S = (
        Constructor("0", (), ConstDenotation(0)),
        Constructor("1", (), ConstDenotation(1)),
        Constructor(x, (), VarDenotation(x)),
        Constructor(y, (), VarDenotation(y)),
        Constructor("+", ("S", "S"), OpDenotation(Op.ADD)),
        Constructor("-", ("S", "S"), OpDenotation(Op.SUB)),
        Constructor("ite", ("C", "S", "S"), OpDenotation(Op.ITE)),
    )
    C = (
        Constructor("<=", ("S", "S"), OpDenotation(Op.LEQ)),
        Constructor("=", ("S", "S"), OpDenotation(Op.EQ)),
        Constructor("and", ("C", "C"), OpDenotation(Op.AND)),
        Constructor("or", ("C", "C"), OpDenotation(Op.OR)),
        Constructor("not", ("C",), OpDenotation(Op.NOT)),
    )
    return GrammarSpec(
        (Datatype("S", Sort.INT, S), Datatype("C", Sort.BOOL, C)),
        "S",
        ((x, Sort.INT), (y, Sort.INT)),
    )
