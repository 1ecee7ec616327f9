"""Reader and printer for the SyGuS-style problem files.

See ``docs/format.md`` for the accepted subset.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import terms as T
from .grammar import (
    ConstDenotation,
    Constructor,
    Datatype,
    GrammarError,
    GrammarSpec,
    OpDenotation,
    VarDenotation,
)
from .problem import Conjecture
from .terms import Op, Sort, Term


class ProblemError(Exception):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = f"{line}:{col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


class ParseError(ProblemError):
    """Malformed s-expression or command structure."""


class SortError(ProblemError):
    pass


class UnknownSymbol(ProblemError):
    pass


# -- s-expressions -------------------------------------------------------------


class Atom(str):
    line: int
    col: int


class SList(list):
    line: int
    col: int


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _pos(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def read_sexprs(text: str) -> list:
    stack: list[SList] = [SList()]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", *_pos(text, pos))
        tok = m.group()
        if tok == "(":
            node = SList()
            node.line, node.col = _pos(text, pos)
            stack[-1].append(node)
            stack.append(node)
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", *_pos(text, pos))
            stack.pop()
        elif not tok[0].isspace() and tok[0] != ";":
            a = Atom(tok)
            a.line, a.col = _pos(text, pos)
            stack[-1].append(a)
        pos = m.end()
    if len(stack) != 1:
        node = stack[-1]
        raise ParseError("unclosed '('", node.line, node.col)
    return stack[0]


def _where(x) -> tuple[int | None, int | None]:
    return getattr(x, "line", None), getattr(x, "col", None)


def _is_numeral(tok: str) -> bool:
    return tok.isdigit() or (tok.startswith("-") and tok[1:].isdigit())


def _sort(x) -> Sort:
    if isinstance(x, Atom) and x in ("Int", "Bool"):
        return Sort(x)
    raise SortError(f"unsupported sort {_show(x)}", *_where(x))


def _show(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(_show(y) for y in x) + ")"
    return str(x)


# -- problem files -------------------------------------------------------------


@dataclass
class ProblemFile:
    fun_name: str
    params: tuple[tuple[str, Sort], ...]
    result_sort: Sort
    grammar: GrammarSpec | None
    variables: tuple[tuple[str, Sort], ...]
    constraints: list[Term] = field(default_factory=list)
    logic: str = "LIA"

    def conjecture(self) -> Conjecture:
        return Conjecture(
            self.fun_name,
            self.params,
            self.result_sort,
            self.variables,
            T.conj(self.constraints),
            self.grammar,
        )


_BINARY = {"<=": T.leq, ">=": T.geq, "<": T.lt, ">": T.gt, "=": T.eq, "=>": T.implies}
_GRAMMAR_OPS = {"+": Op.ADD, "-": Op.SUB, "<=": Op.LEQ, "=": Op.EQ, "and": Op.AND, "or": Op.OR, "not": Op.NOT, "ite": Op.ITE}


class _TermReader:
    def __init__(self, scope: dict[str, Sort], fun: tuple[str, tuple[Sort, ...], Sort] | None):
        self.scope = scope
        self.fun = fun

    def read(self, x) -> Term:
        try:
            return self._read(x)
        except T.SortMismatch as e:
            raise SortError(f"{e} in {_show(x)}", *_where(x)) from None

    def _read(self, x) -> Term:
        if isinstance(x, Atom):
            if _is_numeral(x):
                return T.IntConst(int(x))
            if x == "true":
                return T.TRUE
            if x == "false":
                return T.FALSE
            if x in self.scope:
                return T.Var(str(x), self.scope[x])
            if self.fun is not None and x == self.fun[0] and not self.fun[1]:
                return T.Call(str(x), (), self.fun[2])
            raise UnknownSymbol(f"unknown symbol {x!r}", *_where(x))
        if not x:
            raise ParseError("empty application", *_where(x))
        head, *rest = x
        if not isinstance(head, Atom):
            raise ParseError(f"bad operator {_show(head)}", *_where(head))
        if head == "-" and len(rest) == 1 and isinstance(rest[0], Atom) and rest[0].isdigit():
            return T.IntConst(-int(rest[0]))
        args = [self._read(a) for a in rest]
        if self.fun is not None and head == self.fun[0]:
            name, sorts, result = self.fun
            if len(args) != len(sorts):
                raise SortError(f"{name} expects {len(sorts)} arguments", *_where(x))
            for a, s in zip(args, sorts):
                if a.sort is not s:
                    raise SortError(f"argument {a} of {name} should be {s}", *_where(x))
            return T.Call(name, tuple(args), result)
        n = len(args)
        if head in _BINARY:
            self._arity(x, n, 2)
            return _BINARY[head](*args)
        if head == "+":
            if n < 2:
                raise ParseError("+ needs at least two arguments", *_where(x))
            out = args[0]
            for a in args[1:]:
                out = T.add(out, a)
            return out
        if head == "-":
            if n == 1:
                return T.sub(T.IntConst(0), args[0])
            self._arity(x, n, 2)
            return T.sub(*args)
        if head in ("and", "or"):
            if n < 2:
                raise ParseError(f"{head} needs at least two arguments", *_where(x))
            return T.conj(args) if head == "and" else T.disj(args)
        if head == "not":
            self._arity(x, n, 1)
            return T.not_(args[0])
        if head == "ite":
            self._arity(x, n, 3)
            return T.ite(*args)
        raise UnknownSymbol(f"unknown function {head!r}", *_where(head))

    @staticmethod
    def _arity(x, n: int, k: int) -> None:
        if n != k:
            raise ParseError(f"{x[0]} expects {k} arguments, got {n}", *_where(x))


def _params(x) -> tuple[tuple[str, Sort], ...]:
    if not isinstance(x, list):
        raise ParseError("expected a parameter list", *_where(x))
    out = []
    for p in x:
        if not isinstance(p, list) or len(p) != 2 or not isinstance(p[0], Atom):
            raise ParseError(f"bad parameter {_show(p)}", *_where(p))
        out.append((str(p[0]), _sort(p[1])))
    if len({n for n, _ in out}) != len(out):
        raise ParseError("duplicate parameter name", *_where(x))
    return tuple(out)


def _grammar(x, params) -> GrammarSpec:
    if not isinstance(x, list) or not x:
        raise ParseError("expected a grammar block", *_where(x))
    declared = {}
    for block in x:
        if not isinstance(block, list) or len(block) != 3 or not isinstance(block[0], Atom):
            raise ParseError(f"bad nonterminal block {_show(block)}", *_where(block))
        declared[str(block[0])] = _sort(block[1])
    pnames = dict(params)
    datatypes = []
    for block in x:
        name, sort, rules = str(block[0]), declared[str(block[0])], block[2]
        if not isinstance(rules, list):
            raise ParseError(f"bad rule list for {name}", *_where(rules))
        ctors: list[Constructor] = []
        used: set[str] = set()

        def fresh(base: str) -> str:
            cname, i = base, 1
            while cname in used:
                i += 1
                cname = f"{base}#{i}"
            used.add(cname)
            return cname

        for r in rules:
            ctors.append(_rule(r, sort, declared, pnames, fresh))
        datatypes.append(Datatype(name, sort, tuple(ctors)))
    try:
        return GrammarSpec(tuple(datatypes), datatypes[0].name, tuple(params))
    except GrammarError as e:
        raise SortError(str(e), *_where(x)) from None


def _rule(r, sort, declared, pnames, fresh) -> Constructor:
    if isinstance(r, Atom):
        if _is_numeral(r):
            return Constructor(fresh(str(int(r))), (), ConstDenotation(int(r)))
        if r in ("true", "false"):
            return Constructor(fresh(str(r)), (), ConstDenotation(r == "true"))
        if r in pnames:
            return Constructor(fresh(str(r)), (), VarDenotation(str(r)))
        raise UnknownSymbol(f"unknown grammar symbol {r!r}", *_where(r))
    if len(r) == 2 and r[0] in ("Constant", "Variable"):
        lit = r[1]
        if r[0] == "Variable":
            if not isinstance(lit, Atom) or lit not in pnames:
                raise UnknownSymbol(f"unknown variable {_show(lit)}", *_where(r))
            return Constructor(fresh(str(lit)), (), VarDenotation(str(lit)))
        value = _TermReader({}, None).read(lit)
        if not isinstance(value, (T.IntConst, T.BoolConst)):
            raise ParseError(f"bad constant {_show(lit)}", *_where(r))
        return Constructor(fresh(str(value.value).lower()), (), ConstDenotation(value.value))
    head = r[0] if r else None
    if not isinstance(head, Atom) or head not in _GRAMMAR_OPS:
        raise UnknownSymbol(f"unsupported grammar operator {_show(head)}", *_where(r))
    args = []
    for a in r[1:]:
        if not isinstance(a, Atom) or a not in declared:
            raise UnknownSymbol(f"unknown nonterminal {_show(a)}", *_where(a))
        args.append(str(a))
    return Constructor(fresh(str(head)), tuple(args), OpDenotation(_GRAMMAR_OPS[head]))


def parse(text: str) -> ProblemFile:
    """Parse a problem file; raises ParseError, SortError or UnknownSymbol."""
    cmds = read_sexprs(text)
    logic = None
    synth = None
    variables: list[tuple[str, Sort]] = []
    raw_constraints = []
    checked = False
    for cmd in cmds:
        if not isinstance(cmd, list) or not cmd or not isinstance(cmd[0], Atom):
            raise ParseError(f"expected a command, got {_show(cmd)}", *_where(cmd))
        head = cmd[0]
        if head == "set-logic":
            if len(cmd) != 2 or cmd[1] != "LIA":
                raise ParseError("only (set-logic LIA) is supported", *_where(cmd))
            logic = "LIA"
        elif head == "synth-fun":
            if synth is not None:
                raise ParseError("more than one synth-fun", *_where(cmd))
            if len(cmd) not in (4, 5) or not isinstance(cmd[1], Atom):
                raise ParseError("synth-fun expects name, parameters, sort and optional grammar", *_where(cmd))
            params = _params(cmd[2])
            result = _sort(cmd[3])
            grammar = _grammar(cmd[4], params) if len(cmd) == 5 else None
            if grammar is not None and grammar.result_sort is not result:
                raise SortError("grammar start sort differs from the result sort", *_where(cmd[4]))
            synth = (str(cmd[1]), params, result, grammar)
        elif head == "declare-var":
            if len(cmd) != 3 or not isinstance(cmd[1], Atom):
                raise ParseError("declare-var expects a name and a sort", *_where(cmd))
            if any(n == cmd[1] for n, _ in variables):
                raise ParseError(f"variable {cmd[1]} declared twice", *_where(cmd))
            variables.append((str(cmd[1]), _sort(cmd[2])))
        elif head == "constraint":
            if len(cmd) != 2:
                raise ParseError("constraint expects one term", *_where(cmd))
            raw_constraints.append(cmd[1])
        elif head == "check-synth":
            checked = True
        else:
            raise ParseError(f"unsupported command {head!r}", *_where(cmd))
    if synth is None:
        raise ParseError("missing synth-fun")
    if not raw_constraints:
        raise ParseError("no constraints")
    if not checked:
        raise ParseError("missing (check-synth)")
    name, params, result, grammar = synth
    if any(n == name for n, _ in variables):
        raise ParseError(f"{name} is both a variable and the synthesized function")
    reader = _TermReader(dict(variables), (name, tuple(s for _, s in params), result))
    constraints = []
    for raw in raw_constraints:
        t = reader.read(raw)
        if t.sort is not Sort.BOOL:
            raise SortError(f"constraint is not Bool: {_show(raw)}", *_where(raw))
        constraints.append(t)
    return ProblemFile(name, params, result, grammar, tuple(variables), constraints, logic or "LIA")


def _print_params(params) -> str:
    return "(" + " ".join(f"({n} {s})" for n, s in params) + ")"


def _print_rule(c: Constructor) -> str:
    den = c.denotation
    if isinstance(den, VarDenotation):
        return f"(Variable {den.name})"
    if isinstance(den, ConstDenotation):
        v = den.value
        lit = ("true" if v else "false") if isinstance(v, bool) else T.to_sexpr(T.IntConst(v))
        return f"(Constant {lit})"
    return "(" + " ".join([den.op.value, *c.args]) + ")"


def print_grammar(g: GrammarSpec) -> str:
    blocks = []
    for d in g.datatypes:
        rules = " ".join(_print_rule(c) for c in d.constructors)
        blocks.append(f"({d.name} {d.sort} ({rules}))")
    return "(" + " ".join(blocks) + ")"


def print_problem(p: ProblemFile) -> str:
    lines = [f"(set-logic {p.logic})"]
    head = f"(synth-fun {p.fun_name} {_print_params(p.params)} {p.result_sort}"
    if p.grammar is not None:
        head += " " + print_grammar(p.grammar)
    lines.append(head + ")")
    lines += [f"(declare-var {n} {s})" for n, s in p.variables]
    lines += [f"(constraint {T.to_sexpr(t)})" for t in p.constraints]
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"


def print_solution(p: ProblemFile | Conjecture, body: Term) -> str:
    name = p.fun_name
    params = p.params
    result = p.result_sort if isinstance(p, ProblemFile) else p.fun_result_sort
    return f"(define-fun {name} {_print_params(params)} {result} {T.to_sexpr(body)})"


def parse_term(text: str, scope: dict[str, Sort] | None = None) -> Term:
    """Parse a single term over the given variables (Int unless stated)."""
    (x,) = read_sexprs(text)
    if scope is None:
        scope = {a: Sort.INT for a in _operand_atoms(x)}
    return _TermReader(scope, None).read(x)


def _operand_atoms(x) -> set[str]:
    if isinstance(x, Atom):
        if _is_numeral(x) or x in ("true", "false"):
            return set()
        return {str(x)}
    out: set[str] = set()
    for a in x[1:]:
        out |= _operand_atoms(a)
    return out
