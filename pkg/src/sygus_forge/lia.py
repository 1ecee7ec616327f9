"""Decision procedure for quantifier-free linear integer arithmetic.

Boolean structure is handled by DPLL-style splitting on atoms; each partial
assignment's arithmetic literals are checked by an Omega-test core that
decides integer feasibility exactly and produces a model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import terms as T
from .terms import Op, Sort, Term, Value


class ResourceLimit(Exception):
    def __init__(self, budget: int):
        super().__init__(f"solver budget of {budget} steps exceeded")
        self.budget = budget


class InternalError(Exception):
    pass


DEFAULT_BUDGET = 10**6
# steps spent looking for a smaller model; running out keeps the model already found
MINIMIZE_BUDGET = 2000


@dataclass(frozen=True)
class SatResult:
    sat: bool
    model: dict[str, Value] | None = None

    def __bool__(self) -> bool:
        return self.sat


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ResourceLimit(self.limit)


# -- linear expressions ------------------------------------------------------
# A linear expression is (coefs, const) with coefs a sorted tuple of
# (var, nonzero int).


def _lin_add(a, b, sign=1):
    coefs = dict(a[0])
    for v, c in b[0]:
        coefs[v] = coefs.get(v, 0) + sign * c
    return tuple(sorted((v, c) for v, c in coefs.items() if c)), a[1] + sign * b[1]


def _lin(t: Term, enc: "_Encoder"):
    """Linear expression for an integer term; each ite becomes a defined fresh variable."""
    if isinstance(t, T.IntConst):
        return (), t.value
    if isinstance(t, T.Var):
        return ((t.name, 1),), 0
    if isinstance(t, T.App):
        if t.op is Op.ITE:
            return ((enc.ite_var(t), 1),), 0
        if t.op in (Op.ADD, Op.SUB):
            sign = 1 if t.op is Op.ADD else -1
            return _lin_add(_lin(t.args[0], enc), _lin(t.args[1], enc), sign)
    raise TypeError(f"not a ground integer term: {t}")


# -- NNF formulas ------------------------------------------------------------
# True | False | ("lit", atom_id, polarity) | ("and", tuple) | ("or", tuple)


def _and(a, b):
    if a is False or b is False:
        return False
    if a is True:
        return b
    if b is True:
        return a
    return ("and", (a, b))


def _or(a, b):
    if a is True or b is True:
        return True
    if a is False:
        return b
    if b is False:
        return a
    return ("or", (a, b))


def _neg(f):
    if f is True:
        return False
    if f is False:
        return True
    tag = f[0]
    if tag == "lit":
        return ("lit", f[1], not f[2])
    if tag == "and":
        return ("or", tuple(_neg(x) for x in f[1]))
    return ("and", tuple(_neg(x) for x in f[1]))


def _gcd_all(coefs) -> int:
    g = 0
    for _, c in coefs:
        g = math.gcd(g, c)
    return g


class _Encoder:
    """Interns atoms and converts Bool terms into NNF over atom literals."""

    def __init__(self):
        self.atoms: list[tuple] = []
        self.index: dict[tuple, int] = {}
        self.int_vars: set[str] = set()
        self.bool_vars: set[str] = set()
        self.ite_vars: dict[Term, str] = {}
        self.defs: list = []

    def ite_var(self, t: Term) -> str:
        """Fresh v with (c -> v = a) and (not c -> v = b), shared by equal ite terms."""
        name = self.ite_vars.get(t)
        if name is None:
            name = f"%ite{len(self.ite_vars)}"
            self.ite_vars[t] = name
            c = self.formula(t.args[0])
            v = (((name, 1),), 0)
            then = self._eq(_lin_add(v, _lin(t.args[1], self), -1))
            other = self._eq(_lin_add(v, _lin(t.args[2], self), -1))
            self.defs.append(_or(_neg(c), then))
            self.defs.append(_or(c, other))
        return name

    def atom(self, key: tuple):
        if key not in self.index:
            self.index[key] = len(self.atoms)
            self.atoms.append(key)
        return ("lit", self.index[key], True)

    def _le(self, lin):
        # lin <= 0
        coefs, c = lin
        if not coefs:
            return c <= 0
        g = _gcd_all(coefs)
        coefs = tuple((v, k // g) for v, k in coefs)
        c = -((-c) // g)
        return self.atom(("le", coefs, c))

    def _eq(self, lin):
        coefs, c = lin
        if not coefs:
            return c == 0
        g = _gcd_all(coefs)
        if c % g:
            return False
        coefs = tuple((v, k // g) for v, k in coefs)
        c //= g
        if coefs[0][1] < 0:
            coefs = tuple((v, -k) for v, k in coefs)
            c = -c
        return self.atom(("eq", coefs, c))

    def formula(self, t: Term):
        if isinstance(t, T.BoolConst):
            return t.value
        if isinstance(t, T.Var):
            if t.sort is not Sort.BOOL:
                raise TypeError(f"integer variable {t.name} used as a formula")
            self.bool_vars.add(t.name)
            return self.atom(("bool", t.name))
        if isinstance(t, T.Call):
            raise TypeError(f"formula is not ground: contains call to {t.name}")
        op = t.op
        if op is Op.NOT:
            return _neg(self.formula(t.args[0]))
        if op is Op.AND:
            return _and(self.formula(t.args[0]), self.formula(t.args[1]))
        if op is Op.OR:
            return _or(self.formula(t.args[0]), self.formula(t.args[1]))
        if op is Op.ITE:
            c = self.formula(t.args[0])
            a = self.formula(t.args[1])
            b = self.formula(t.args[2])
            return _or(_and(c, a), _and(_neg(c), b))
        if op in (Op.LEQ, Op.EQ):
            for x in t.args:
                self.int_vars.update(T.free_vars(x))
            diff = _lin_add(_lin(t.args[0], self), _lin(t.args[1], self), -1)
            return self._le(diff) if op is Op.LEQ else self._eq(diff)
        raise TypeError(f"not a formula: {t}")


def _reduce(f, asg):
    if f is True or f is False:
        return f
    tag = f[0]
    if tag == "lit":
        v = asg.get(f[1])
        if v is None:
            return f
        return v == f[2]
    if tag == "and":
        kids = []
        for x in f[1]:
            r = _reduce(x, asg)
            if r is False:
                return False
            if r is not True:
                kids.append(r)
        if not kids:
            return True
        return kids[0] if len(kids) == 1 else ("and", tuple(kids))
    kids = []
    for x in f[1]:
        r = _reduce(x, asg)
        if r is True:
            return True
        if r is not False:
            kids.append(r)
    if not kids:
        return False
    return kids[0] if len(kids) == 1 else ("or", tuple(kids))


def _first_lit(f):
    while f[0] != "lit":
        f = f[1][0]
    return f[1], f[2]


def _forced(f):
    if f[0] == "lit":
        return [f]
    if f[0] == "and":
        return [x for x in f[1] if x[0] == "lit"]
    return []


# -- Omega test ----------------------------------------------------------------
# A constraint is (coefs, const, is_eq) meaning sum(c*v) + const >= 0 (or == 0).


def _normalize(cons):
    """Tighten by gcd, drop trivial rows; None if a row is trivially false."""
    ge: dict[tuple, int] = {}
    eqs: dict[tuple, int] = {}
    for coefs, c, is_eq in cons:
        if not coefs:
            if (c != 0) if is_eq else (c < 0):
                return None
            continue
        g = _gcd_all(coefs)
        if is_eq:
            if c % g:
                return None
            coefs = tuple((v, k // g) for v, k in coefs)
            c //= g
            if coefs[0][1] < 0:
                coefs = tuple((v, -k) for v, k in coefs)
                c = -c
            if coefs in eqs and eqs[coefs] != c:
                return None
            eqs[coefs] = c
        else:
            coefs = tuple((v, k // g) for v, k in coefs)
            c = c // g
            if coefs not in ge or c < ge[coefs]:
                ge[coefs] = c
    out = [(k, c, True) for k, c in eqs.items()]
    for coefs, c in ge.items():
        negk = tuple((v, -k) for v, k in coefs)
        if negk in ge:
            d = ge[negk]
            if c + d < 0:
                return None
            if c + d == 0:
                # opposite pair pins an equality
                if coefs[0][1] > 0:
                    out.append((coefs, c, True))
                continue
        out.append((coefs, c, False))
    return out


def _subst_row(row, var, expr):
    """Replace ``var`` by the linear expression ``expr`` = (coefs, const) in ``row``."""
    coefs, c, is_eq = row
    d = dict(coefs)
    k = d.pop(var, 0)
    if not k:
        return row
    for v, a in expr[0]:
        d[v] = d.get(v, 0) + k * a
    return tuple(sorted((v, a) for v, a in d.items() if a)), c + k * expr[1], is_eq


def _eval_lin(coefs, c, model):
    return sum(k * model.get(v, 0) for v, k in coefs) + c


def _closest_to_zero(lo, hi):
    if lo is not None and lo > 0:
        return lo
    if hi is not None and hi < 0:
        return hi
    return 0


class _Omega:
    def __init__(self, budget: _Budget):
        self.budget = budget
        self.fresh = 0

    def _new_var(self) -> str:
        self.fresh += 1
        return f"%w{self.fresh}"

    def solve(self, cons) -> dict[str, int] | None:
        self.budget.tick()
        cons = _normalize(cons)
        if cons is None:
            return None
        if not cons:
            return {}
        eqs = [r for r in cons if r[2]]
        if eqs:
            return self._solve_eq(cons, eqs)
        return self._solve_ineq(cons)

    def _solve_eq(self, cons, eqs):
        # eliminate unit-coefficient equalities in one batch, normalizing once afterwards
        rows = list(cons)
        solved = []
        while True:
            pick = None
            for i, (coefs, c, is_eq) in enumerate(rows):
                if not is_eq:
                    continue
                if not coefs:
                    if c != 0:
                        return None
                    continue
                for v, k in coefs:
                    if abs(k) == 1:
                        pick = (i, v, k)
                        break
                if pick is not None:
                    break
            if pick is None:
                break
            i, var, k = pick
            row = rows.pop(i)
            # k*var + rest + c = 0  =>  var = -k*(rest + c)
            expr = (tuple((v, -k * a) for v, a in row[0] if v != var), -k * row[1])
            rows = [_subst_row(r, var, expr) for r in rows]
            solved.append((var, expr))
            self.budget.tick()
        if solved:
            model = self.solve(rows)
            if model is None:
                return None
            for var, expr in reversed(solved):
                model[var] = _eval_lin(expr[0], expr[1], model)
            return model
        # no unit coefficient: unimodular change of the smallest-coefficient variable
        row = min(eqs, key=lambda r: (min(abs(k) for _, k in r[0]), r[0]))
        var, ak = min(row[0], key=lambda vk: (abs(vk[1]), vk[0]))
        fresh = self._new_var()
        # var = fresh - sum(q_j * x_j), q_j = a_j // ak
        shift = [(v, a // ak) for v, a in row[0] if v != var and a // ak]
        expr = (tuple(sorted([(fresh, 1)] + [(v, -q) for v, q in shift])), 0)
        rest = [_subst_row(r, var, expr) for r in cons]
        model = self.solve(rest)
        if model is None:
            return None
        model[var] = _eval_lin(expr[0], expr[1], model)
        return model

    def _bounds(self, cons, var):
        lower, upper, other = [], [], []
        for r in cons:
            k = dict(r[0]).get(var, 0)
            if k > 0:
                lower.append(r)
            elif k < 0:
                upper.append(r)
            else:
                other.append(r)
        return lower, upper, other

    def _pick_var(self, cons):
        variables = sorted({v for r in cons for v, _ in r[0]})
        best = None
        for v in variables:
            lower, upper, _ = self._bounds(cons, v)
            if not lower or not upper:
                return v, True
            exact = all(dict(r[0])[v] == 1 for r in lower) or all(dict(r[0])[v] == -1 for r in upper)
            score = (not exact, len(lower) * len(upper), v)
            if best is None or score < best[0]:
                best = (score, v, exact)
        return best[1], best[2]

    def _combine(self, lo_row, up_row, var, dark):
        b = dict(lo_row[0])[var]
        a = -dict(up_row[0])[var]
        d: dict[str, int] = {}
        for v, k in lo_row[0]:
            if v != var:
                d[v] = d.get(v, 0) + a * k
        for v, k in up_row[0]:
            if v != var:
                d[v] = d.get(v, 0) + b * k
        c = a * lo_row[1] + b * up_row[1]
        if dark:
            c -= (a - 1) * (b - 1)
        return tuple(sorted((v, k) for v, k in d.items() if k)), c, False

    def _extend(self, model, cons, var):
        lo = hi = None
        for coefs, c, _ in cons:
            k = dict(coefs).get(var, 0)
            if not k:
                continue
            rest = sum(a * model.get(v, 0) for v, a in coefs if v != var) + c
            if k > 0:
                bound = -((rest) // k)  # ceil(-rest / k)
                lo = bound if lo is None else max(lo, bound)
            else:
                bound = rest // (-k)
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None and lo > hi:
            return False
        model[var] = _closest_to_zero(lo, hi)
        return True

    def _solve_ineq(self, cons):
        var, exact = self._pick_var(cons)
        lower, upper, other = self._bounds(cons, var)
        self.budget.tick(len(lower) * len(upper))
        if not lower or not upper:
            model = self.solve(other)
            if model is None:
                return None
            self._extend(model, lower + upper, var)
            return model
        real = other + [self._combine(l, u, var, False) for l in lower for u in upper]
        if exact:
            model = self.solve(real)
            if model is not None and not self._extend(model, lower + upper, var):
                raise InternalError("exact projection produced an empty interval")
            return model
        if self.solve(real) is None:
            return None
        dark = other + [self._combine(l, u, var, True) for l in lower for u in upper]
        model = self.solve(dark)
        if model is not None:
            if not self._extend(model, lower + upper, var):
                raise InternalError("dark shadow produced an empty interval")
            return model
        amax = max(-dict(u[0])[var] for u in upper)
        for lo_row in lower:
            b = dict(lo_row[0])[var]
            for i in range((amax * b - amax - b) // amax + 1):
                # splinter: b*var + rest == i
                model = self.solve(cons + [(lo_row[0], lo_row[1] - i, True)])
                if model is not None:
                    return model
        return None


# -- theory + Boolean search -------------------------------------------------


class _Search:
    def __init__(self, enc: _Encoder, budget: _Budget, box: int | None):
        self.enc = enc
        self.budget = budget
        self.box = box
        self.cache: dict[frozenset, dict | None] = {}

    def theory(self, asg: Mapping[int, bool]):
        key = frozenset((a, v) for a, v in asg.items() if self.enc.atoms[a][0] != "bool")
        if key in self.cache:
            return self.cache[key]
        cons = []
        diseqs = []
        for a, val in sorted(key):
            kind, coefs, c = self.enc.atoms[a]
            if kind == "le":
                # coefs.x + c <= 0, negation coefs.x + c >= 1
                if val:
                    cons.append((tuple((v, -k) for v, k in coefs), -c, False))
                else:
                    cons.append((coefs, c - 1, False))
            elif val:
                cons.append((coefs, c, True))
            else:
                diseqs.append((coefs, c))
        if self.box is not None:
            names = {v for coefs, _, _ in cons for v, _ in coefs}
            names |= {v for coefs, _ in diseqs for v, _ in coefs}
            for v in sorted(n for n in names if not n.startswith("%")):
                cons.append((((v, 1),), self.box, False))
                cons.append((((v, -1),), self.box, False))
        model = self._with_diseqs(cons, diseqs)
        self.cache[key] = model
        return model

    def _with_diseqs(self, cons, diseqs):
        model = _Omega(self.budget).solve(cons)
        if model is None:
            return None
        for coefs, c in diseqs:
            if _eval_lin(coefs, c, model) == 0:
                neg = tuple((v, -k) for v, k in coefs)
                # coefs.x + c <= -1  or  coefs.x + c >= 1
                left = self._with_diseqs(cons + [(neg, -c - 1, False)], diseqs)
                if left is not None:
                    return left
                return self._with_diseqs(cons + [(coefs, c - 1, False)], diseqs)
        return model

    def run(self, f, asg: dict[int, bool]):
        # propagate forced literals, consulting the theory only at the fixpoint
        while True:
            self.budget.tick()
            f = _reduce(f, asg)
            if f is False:
                return None
            forced = _forced(f) if f is not True else None
            if not forced:
                model = self.theory(asg)
                if model is None:
                    return None
                if f is True:
                    return model, asg
                break
            asg = dict(asg)
            for _, a, pol in forced:
                asg[a] = pol
        # decide the first literal, trying the phase that satisfies it first
        atom, phase = _first_lit(f)
        for val in (phase, not phase):
            nxt = dict(asg)
            nxt[atom] = val
            r = self.run(f, nxt)
            if r is not None:
                return r
        return None


def check_sat(
    f: Term,
    budget: int = DEFAULT_BUDGET,
    minimize: bool = True,
) -> SatResult:
    """Decide a ground Bool term; Sat results carry a model over its free variables.

    With ``minimize`` the model is searched inside boxes |v| <= 1, 2, 4, ...
    before falling back to the unrestricted model; that search has its own
    small step allowance and never changes the verdict.
    """
    if f.sort is not Sort.BOOL:
        raise TypeError("check_sat expects a Bool term")
    fv = T.free_vars(f)
    enc = _Encoder()
    nnf = enc.formula(f)
    if enc.defs:
        nnf = _reduce(("and", (nnf, *enc.defs)), {})
    steps = _Budget(budget)
    found = _Search(enc, steps, None).run(nnf, {})
    if found is None:
        return SatResult(False)
    if minimize:
        peak = max((abs(v) for k, v in found[0].items() if k in fv), default=0)
        box = 1
        spare = _Budget(min(MINIMIZE_BUDGET, budget))
        try:
            while box < peak:
                smaller = _Search(enc, spare, box).run(nnf, {})
                if smaller is not None:
                    found = smaller
                    break
                box *= 2
        except ResourceLimit:
            pass
    int_model, asg = found
    model: dict[str, Value] = {}
    for name, sort in sorted(fv.items()):
        if sort is Sort.BOOL:
            idx = enc.index.get(("bool", name))
            model[name] = bool(asg.get(idx, False)) if idx is not None else False
        else:
            model[name] = int_model.get(name, 0)
    if T.evaluate(f, model) is not True:
        raise InternalError(f"model {model} does not satisfy {f}")
    return SatResult(True, model)
