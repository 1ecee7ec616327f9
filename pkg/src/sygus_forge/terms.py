"""Ground terms over the Int/Bool builtin language.

Terms are immutable and hashable. Comparison operators other than ``<=`` are
folded into ``Leq``/``Not`` at construction time; the original spelling is
kept as a ``surface`` hint that only the printer looks at.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

Value = Union[int, bool]


class Sort(enum.Enum):
    INT = "Int"
    BOOL = "Bool"

    def __str__(self) -> str:
        return self.value


class Op(enum.Enum):
    ADD = "+"
    SUB = "-"
    LEQ = "<="
    EQ = "="
    AND = "and"
    OR = "or"
    NOT = "not"
    ITE = "ite"


class TermError(Exception):
    pass


class UnboundVariable(TermError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class SortMismatch(TermError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    sort: Sort = Sort.INT

    def __str__(self) -> str:
        return to_sexpr(self)


@dataclass(frozen=True)
class IntConst:
    value: int

    @property
    def sort(self) -> Sort:
        return Sort.INT

    def __str__(self) -> str:
        return to_sexpr(self)


@dataclass(frozen=True)
class BoolConst:
    value: bool

    @property
    def sort(self) -> Sort:
        return Sort.BOOL

    def __str__(self) -> str:
        return to_sexpr(self)


@dataclass(frozen=True)
class App:
    op: Op
    args: tuple[Term, ...]
    surface: str | None = field(default=None, compare=False)

    @property
    def sort(self) -> Sort:
        if self.op in (Op.ADD, Op.SUB):
            return Sort.INT
        if self.op is Op.ITE:
            return self.args[1].sort
        return Sort.BOOL

    def __str__(self) -> str:
        return to_sexpr(self)


@dataclass(frozen=True)
class Call:
    """Application of the function being synthesized."""

    name: str
    args: tuple[Term, ...]
    sort: Sort = Sort.INT

    def __str__(self) -> str:
        return to_sexpr(self)


Term = Union[Var, IntConst, BoolConst, App, Call]

TRUE = BoolConst(True)
FALSE = BoolConst(False)


_ARG_SORTS = {
    Op.ADD: (Sort.INT, Sort.INT),
    Op.SUB: (Sort.INT, Sort.INT),
    Op.LEQ: (Sort.INT, Sort.INT),
    Op.EQ: (Sort.INT, Sort.INT),
    Op.AND: (Sort.BOOL, Sort.BOOL),
    Op.OR: (Sort.BOOL, Sort.BOOL),
    Op.NOT: (Sort.BOOL,),
}

ARITY = {op: len(sorts) for op, sorts in _ARG_SORTS.items()}
ARITY[Op.ITE] = 3


def mk(op: Op, *args: Term, surface: str | None = None) -> App:
    """Build a well-sorted application, raising SortMismatch otherwise."""
    if op is Op.ITE:
        if len(args) != 3:
            raise SortMismatch("ite takes 3 arguments")
        c, a, b = args
        if c.sort is not Sort.BOOL or a.sort is not b.sort:
            raise SortMismatch(f"ill-sorted ite: {c.sort}, {a.sort}, {b.sort}")
        return App(op, tuple(args), surface)
    expected = _ARG_SORTS[op]
    if len(args) != len(expected):
        raise SortMismatch(f"{op.value} takes {len(expected)} arguments, got {len(args)}")
    for a, s in zip(args, expected):
        if a.sort is not s:
            raise SortMismatch(f"{op.value} expects {s} argument, got {a.sort}: {a}")
    return App(op, tuple(args), surface)


# surface constructors


def add(a: Term, b: Term) -> App:
    return mk(Op.ADD, a, b)


def sub(a: Term, b: Term) -> App:
    return mk(Op.SUB, a, b)


def leq(a: Term, b: Term) -> App:
    return mk(Op.LEQ, a, b)


def geq(a: Term, b: Term) -> App:
    return mk(Op.LEQ, b, a, surface=">=")


def lt(a: Term, b: Term) -> App:
    return mk(Op.NOT, mk(Op.LEQ, b, a), surface="<")


def gt(a: Term, b: Term) -> App:
    return mk(Op.NOT, mk(Op.LEQ, a, b), surface=">")


def eq(a: Term, b: Term) -> App:
    if a.sort is Sort.BOOL and b.sort is Sort.BOOL:
        # Boolean equality as (a and b) or (not a and not b)
        both = mk(Op.AND, a, b)
        neither = mk(Op.AND, mk(Op.NOT, a), mk(Op.NOT, b))
        return mk(Op.OR, both, neither, surface="=")
    return mk(Op.EQ, a, b)


def and_(a: Term, b: Term) -> App:
    return mk(Op.AND, a, b)


def or_(a: Term, b: Term) -> App:
    return mk(Op.OR, a, b)


def not_(a: Term) -> App:
    return mk(Op.NOT, a)


def implies(a: Term, b: Term) -> App:
    return mk(Op.OR, mk(Op.NOT, a), b, surface="=>")


def ite(c: Term, a: Term, b: Term) -> App:
    return mk(Op.ITE, c, a, b)


def conj(terms) -> Term:
    """Right-nested conjunction; TRUE for an empty sequence."""
    terms = list(terms)
    if not terms:
        return TRUE
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = and_(t, out)
    return out


def disj(terms) -> Term:
    terms = list(terms)
    if not terms:
        return FALSE
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = or_(t, out)
    return out


# traversal


def free_vars(t: Term) -> dict[str, Sort]:
    out: dict[str, Sort] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out[node.name] = node.sort
        elif isinstance(node, (App, Call)):
            stack.extend(node.args)
    return out


def calls(t: Term) -> list[Call]:
    """Every ``Call`` node in ``t``, outermost first."""
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Call):
            out.append(node)
        if isinstance(node, (App, Call)):
            stack.extend(reversed(node.args))
    return out


def term_size(t: Term) -> int:
    if isinstance(t, (App, Call)):
        return 1 + sum(term_size(a) for a in t.args)
    return 1


# evaluation


def evaluate(
    t: Term,
    a: Mapping[str, Value],
    fun: Callable[[str, tuple[Value, ...]], Value] | None = None,
) -> Value:
    """Value of ``t`` under ``a``; ``fun`` interprets ``Call`` nodes."""
    if isinstance(t, Var):
        try:
            return a[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, (IntConst, BoolConst)):
        return t.value
    if isinstance(t, Call):
        if fun is None:
            raise UnboundVariable(t.name)
        return fun(t.name, tuple(evaluate(x, a, fun) for x in t.args))
    op = t.op
    if op is Op.ITE:
        c, x, y = t.args
        return evaluate(x, a, fun) if evaluate(c, a, fun) else evaluate(y, a, fun)
    if op is Op.NOT:
        return not evaluate(t.args[0], a, fun)
    if op is Op.AND:
        return evaluate(t.args[0], a, fun) and evaluate(t.args[1], a, fun)
    if op is Op.OR:
        return evaluate(t.args[0], a, fun) or evaluate(t.args[1], a, fun)
    x = evaluate(t.args[0], a, fun)
    y = evaluate(t.args[1], a, fun)
    if op is Op.ADD:
        return x + y
    if op is Op.SUB:
        return x - y
    if op is Op.LEQ:
        return x <= y
    return x == y


# substitution


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Simultaneous substitution of variables by terms."""
    fv = free_vars(t)
    for name, rep in sigma.items():
        sort = fv.get(name)
        if sort is not None and rep.sort is not sort:
            raise SortMismatch(f"cannot substitute {rep.sort} term for {name}: {sort}")
    if not sigma:
        return t
    return _subst(t, sigma, {})


def _subst(t: Term, sigma: Mapping[str, Term], memo: dict) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, (IntConst, BoolConst)):
        return t
    hit = memo.get(id(t))
    if hit is not None:
        return hit
    args = tuple(_subst(x, sigma, memo) for x in t.args)
    if isinstance(t, Call):
        out = Call(t.name, args, t.sort)
    else:
        out = App(t.op, args, t.surface)
    memo[id(t)] = out
    return out


def instantiate_function(
    t: Term, name: str, params: tuple[str, ...], body: Term
) -> Term:
    """Replace each call ``name(a1..an)`` in ``t`` by ``body[params := a]``."""

    def go(node: Term) -> Term:
        if isinstance(node, (Var, IntConst, BoolConst)):
            return node
        args = tuple(go(x) for x in node.args)
        if isinstance(node, Call):
            if node.name == name:
                return substitute(body, dict(zip(params, args)))
            return Call(node.name, args, node.sort)
        return App(node.op, args, node.surface)

    return go(t)


def replace_calls(t: Term, name: str, rep: Term) -> Term:
    """Replace every call of ``name`` (whatever its arguments) by ``rep``."""
    if isinstance(t, Call) and t.name == name:
        return rep
    if isinstance(t, App):
        return App(t.op, tuple(replace_calls(x, name, rep) for x in t.args), t.surface)
    if isinstance(t, Call):
        return Call(t.name, tuple(replace_calls(x, name, rep) for x in t.args), t.sort)
    return t


# canonical ordering and simplification


def order_key(t: Term) -> tuple:
    """A total order on terms, used to canonicalize and/or operand lists."""
    if isinstance(t, BoolConst):
        return (0, int(t.value))
    if isinstance(t, IntConst):
        return (1, t.value)
    if isinstance(t, Var):
        return (2, t.name, t.sort.value)
    if isinstance(t, Call):
        return (3, t.name, tuple(order_key(x) for x in t.args))
    return (4, list(Op).index(t.op), tuple(order_key(x) for x in t.args))


def _flatten(op: Op, t: Term, out: list) -> None:
    if isinstance(t, App) and t.op is op:
        for x in t.args:
            _flatten(op, x, out)
    else:
        out.append(t)


def _simp(t: Term) -> Term:
    if not isinstance(t, (App, Call)):
        return t
    args = tuple(_simp(x) for x in t.args)
    if isinstance(t, Call):
        return Call(t.name, args, t.sort)
    op = t.op
    if op in (Op.ADD, Op.SUB):
        x, y = args
        if isinstance(x, IntConst) and isinstance(y, IntConst):
            return IntConst(x.value + y.value if op is Op.ADD else x.value - y.value)
        if isinstance(y, IntConst) and y.value == 0:
            return x
        if op is Op.ADD and isinstance(x, IntConst) and x.value == 0:
            return y
        return App(op, args, t.surface)
    if op in (Op.LEQ, Op.EQ):
        x, y = args
        if isinstance(x, IntConst) and isinstance(y, IntConst):
            return BoolConst(x.value <= y.value if op is Op.LEQ else x.value == y.value)
        if x == y:
            return TRUE
        return App(op, args, t.surface)
    if op is Op.NOT:
        (x,) = args
        if isinstance(x, BoolConst):
            return BoolConst(not x.value)
        if isinstance(x, App) and x.op is Op.NOT:
            return x.args[0]
        return App(op, args, t.surface)
    if op in (Op.AND, Op.OR):
        absorbing = op is Op.OR
        flat: list[Term] = []
        for x in args:
            _flatten(op, x, flat)
        kept: dict[Term, None] = {}
        for x in flat:
            if isinstance(x, BoolConst):
                if x.value == absorbing:
                    return BoolConst(absorbing)
                continue
            kept.setdefault(x, None)
        ordered = sorted(kept, key=order_key)
        if not ordered:
            return BoolConst(not absorbing)
        out = ordered[-1]
        for x in reversed(ordered[:-1]):
            out = App(op, (x, out))
        if t.surface in ("=>", "=") and out.args == args:
            return App(op, args, t.surface)
        return out
    c, x, y = args
    if isinstance(c, BoolConst):
        return x if c.value else y
    if x == y:
        return x
    return App(op, args, t.surface)


def simplify(t: Term) -> Term:
    """Rewrite to a normal form under a small, semantics-preserving rule set."""
    prev = t
    while True:
        nxt = _simp(prev)
        if nxt == prev and _surfaces_equal(nxt, prev):
            return nxt
        prev = nxt


def _surfaces_equal(a: Term, b: Term) -> bool:
    if isinstance(a, App) and isinstance(b, App):
        return a.surface == b.surface and all(
            _surfaces_equal(x, y) for x, y in zip(a.args, b.args)
        )
    if isinstance(a, Call) and isinstance(b, Call):
        return all(_surfaces_equal(x, y) for x, y in zip(a.args, b.args))
    return True


# printing


def _surface_form(t: App) -> tuple[str, tuple[Term, ...]] | None:
    s = t.surface
    if s is None:
        return None
    if s == ">=" and t.op is Op.LEQ:
        return ">=", (t.args[1], t.args[0])
    if s in ("<", ">") and t.op is Op.NOT:
        inner = t.args[0]
        if isinstance(inner, App) and inner.op is Op.LEQ:
            if s == "<":
                return "<", (inner.args[1], inner.args[0])
            return ">", inner.args
    if s == "=" and t.op is Op.OR:
        both = t.args[0]
        if isinstance(both, App) and both.op is Op.AND and t.args[1] == eq(*both.args).args[1]:
            return "=", both.args
    if s == "=>" and t.op is Op.OR:
        first = t.args[0]
        if isinstance(first, App) and first.op is Op.NOT:
            return "=>", (first.args[0], t.args[1])
    return None


def to_sexpr(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, IntConst):
        return str(t.value) if t.value >= 0 else f"(- {-t.value})"
    if isinstance(t, BoolConst):
        return "true" if t.value else "false"
    if isinstance(t, Call):
        if not t.args:
            return t.name
        return "(" + " ".join([t.name, *map(to_sexpr, t.args)]) + ")"
    form = _surface_form(t)
    head, args = form if form is not None else (t.op.value, t.args)
    return "(" + " ".join([head, *map(to_sexpr, args)]) + ")"
