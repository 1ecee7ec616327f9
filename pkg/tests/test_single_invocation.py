import itertools
import random

import pytest

from oracles import PROBLEMS, box_has_model, box_sat, max_property
from sygus_forge import terms as T
from sygus_forge.frontend import parse
from sygus_forge.grammar import (
    Constructor,
    Datatype,
    GrammarSpec,
    OpDenotation,
    VarDenotation,
    denote,
    example_grammar,
)
from sygus_forge.problem import Conjecture, detect_single_invocation
from sygus_forge.single_invocation import (
    GrammarNotIteCapable,
    NotSingleInvocation,
    PoolPolicy,
    PreconditionViolated,
    PropertyNotExpressible,
    build_ite_chain,
    si_state,
    solve_si_syntax_guided,
    solve_single_invocation,
)
from sygus_forge.terms import Op, Sort
from sygus_forge.verifier import verify

x, y = T.Var("x"), T.Var("y")
XY = (("x", Sort.INT), ("y", Sort.INT))
X = (("x", Sort.INT),)
fxy = T.Call("f", (x, y), Sort.INT)
fyx = T.Call("f", (y, x), Sort.INT)
fx = T.Call("f", (x,), Sort.INT)
MAX = Conjecture("f", XY, Sort.INT, XY, max_property())


def test_detect_examples():
    assert detect_single_invocation(MAX)
    assert not detect_single_invocation(Conjecture("f", XY, Sort.INT, XY, T.geq(fxy, fyx)))
    assert not detect_single_invocation(Conjecture("f", XY, Sort.INT, XY, T.geq(fyx, x)))


def test_max_two_rounds():
    out = solve_single_invocation(MAX)
    assert out.verdict == "solution"
    assert [r.candidate for r in out.trace] == [x, y]
    assert T.to_sexpr(out.solution) == "(ite (>= x y) x y)"
    assert verify(out.solution, MAX).valid


def test_unsimplified_chain_is_rendered_q():
    out = solve_single_invocation(MAX, simplify=False)
    st = si_state(MAX)
    assert out.solution == T.ite(st.at(x), x, y)


def test_successor_is_unknown_under_both_pools():
    c = Conjecture("f", X, Sort.INT, X, T.eq(fx, T.add(x, T.IntConst(1))))
    for policy in PoolPolicy:
        out = solve_single_invocation(c, policy, rounds=10)
        assert out.verdict == "unknown"
        assert out.rounds == 10
        # brute force: the ten collected terms never cover every x
        negs = T.conj([T.not_(T.eq(r.candidate, T.add(x, T.IntConst(1)))) for r in out.trace])
        assert box_sat(negs, 20) is not None
        assert all(isinstance(r.candidate, T.IntConst) for r in out.trace)


def test_contradictory_property_infeasible():
    c = Conjecture("f", X, Sort.INT, X, T.and_(T.geq(fx, x), T.lt(fx, x)))
    out = solve_single_invocation(c)
    assert out.verdict == "infeasible" and out.rounds == 0


def test_not_single_invocation():
    with pytest.raises(NotSingleInvocation):
        solve_single_invocation(Conjecture("f", XY, Sort.INT, XY, T.geq(fxy, fyx)))


def test_build_chain_examples():
    st = si_state(MAX)
    chain = build_ite_chain(st, [x, y])
    assert chain.render() == T.ite(st.at(x), x, y)
    single = build_ite_chain(st, [x], check=False)
    assert single.guards == () and single.render() == x
    with pytest.raises(PreconditionViolated):
        build_ite_chain(st, [x])
    with pytest.raises(PreconditionViolated):
        build_ite_chain(st, [])


def test_chain_order_matters_only_syntactically():
    st = si_state(MAX)
    for ts in itertools.permutations([x, y]):
        chain = build_ite_chain(st, list(ts)).render()
        assert verify(chain, MAX).valid


def random_q(rng):
    """Q over g and skolems x, y with small coefficients, as a single-invocation property."""
    def atom():
        lhs = T.add(T.add(T.sub(T.IntConst(0), fxy) if rng.random() < 0.5 else fxy,
                          T.add(*(rng.choice([x, y, T.IntConst(rng.randint(-2, 2))]) for _ in range(2)))),
                    T.IntConst(rng.randint(-2, 2)))
        return rng.choice([T.leq, T.geq, T.eq])(lhs, T.IntConst(0))

    return T.conj([atom() for _ in range(rng.randint(1, 2))])


POOL = [x, y, T.IntConst(0), T.IntConst(1), T.add(x, T.IntConst(1)), T.sub(y, T.IntConst(1)), T.sub(T.IntConst(0), x)]


def test_ite_chain_on_brute_force_pairs():
    rng = random.Random(17)
    found = 0
    for _ in range(200):
        prop = random_q(rng)
        c = Conjecture("f", XY, Sort.INT, XY, prop)
        st = si_state(c)
        for t1, t2 in itertools.permutations(POOL, 2):
            negs = T.and_(T.not_(st.at(t1)), T.not_(st.at(t2)))
            if box_has_model(negs, ["x", "y"], 10):
                continue
            found += 1
            chain = build_ite_chain(st, [t1, t2], check=False).render()
            for _ in range(200):
                a = {"x": rng.randint(-10, 10), "y": rng.randint(-10, 10)}
                assert T.evaluate(st.Q, a | {st.g.name: T.evaluate(chain, a)})
            break
    assert found >= 20


# grammar-restricted variant


def test_syntax_guided_max():
    c = parse((PROBLEMS / "max.sl").read_text()).conjecture()
    out = solve_si_syntax_guided(c)
    assert out.verdict == "solution"
    assert [str(r.program) for r in out.trace] == ["x", "y"]
    assert str(out.program) == "(ite (and (<= x x) (and (<= y x) (or (= x x) (= x y)))) x y)"
    # the grammar spells >= as a flipped <=, so compare structurally
    assert T.simplify(denote(out.program, c.grammar)) == T.ite(T.geq(x, y), x, y)
    assert T.to_sexpr(out.solution) == "(ite (>= x y) x y)"


def test_syntax_guided_needs_ite():
    c = parse((PROBLEMS / "max_nullary.sl").read_text()).conjecture()
    with pytest.raises(GrammarNotIteCapable):
        solve_si_syntax_guided(c)


def test_syntax_guided_needs_expressible_property():
    S = (
        Constructor("x", (), VarDenotation("x")),
        Constructor("y", (), VarDenotation("y")),
        Constructor("ite", ("C", "S", "S"), OpDenotation(Op.ITE)),
    )
    C = (
        Constructor("<=", ("S", "S"), OpDenotation(Op.LEQ)),
        Constructor("=", ("S", "S"), OpDenotation(Op.EQ)),
        Constructor("and", ("C", "C"), OpDenotation(Op.AND)),
    )
    g = GrammarSpec((Datatype("S", Sort.INT, S), Datatype("C", Sort.BOOL, C)), "S", XY)
    ok = Conjecture("f", XY, Sort.INT, XY, T.and_(T.geq(fxy, x), T.geq(fxy, y)), g)
    assert solve_si_syntax_guided(ok).verdict == "solution"
    strict = Conjecture("f", XY, Sort.INT, XY, T.and_(T.geq(fxy, x), T.lt(y, fxy)), g)
    with pytest.raises(PropertyNotExpressible):
        solve_si_syntax_guided(strict)


def test_syntax_guided_abs_uses_larger_terms():
    c = parse((PROBLEMS / "abs.sl").read_text()).conjecture()
    out = solve_si_syntax_guided(c)
    assert out.verdict == "solution" and verify(out.solution, c).valid
    assert [str(r.program) for r in out.trace] == ["x", "(- 0 x)"]


def test_example_grammar_rounds_match_plain_mode():
    c = Conjecture("f", XY, Sort.INT, XY, max_property(), example_grammar())
    assert solve_si_syntax_guided(c).rounds == solve_single_invocation(c).rounds == 2
