import random

import pytest

from oracles import naive_programs
from sygus_forge import terms as T
from sygus_forge.grammar import (
    ConstDenotation,
    Constructor,
    Datatype,
    GrammarError,
    GrammarSpec,
    OpDenotation,
    ProgramTerm,
    VarDenotation,
    VisitCounter,
    constructor_count,
    denote,
    eval_program,
    example_grammar,
    express,
    size,
)
from sygus_forge.terms import Op, Sort

G = example_grammar()


def S(name, *kids):
    return ProgramTerm(name, tuple(kids), "S")


def C(name, *kids):
    return ProgramTerm(name, tuple(kids), "C")


X, Y, ZERO, ONE = S("x"), S("y"), S("0"), S("1")
MAX = S("ite", C("<=", X, Y), Y, X)


def test_size_examples():
    assert size(X) == 0
    assert size(S("+", X, Y)) == 1
    assert size(MAX) == 2


def test_denote_examples():
    assert denote(X, G) == T.Var("x")
    assert denote(ZERO, G) == T.IntConst(0)
    x, y = T.Var("x"), T.Var("y")
    assert denote(MAX, G) == T.ite(T.leq(x, y), y, x)


def test_eval_program_examples():
    assert eval_program(MAX, G, {"x": 0, "y": 1}) == 1
    assert eval_program(ONE, G, {"x": 5, "y": -3}) == 1
    assert eval_program(S("+", X, Y), G, {"x": 1, "y": 1}) == 2


def test_eval_program_unbound():
    with pytest.raises(T.UnboundVariable):
        eval_program(X, G, {"y": 1})


def test_denote_is_homomorphic():
    # one builtin node per program node
    for p in naive_programs(G, "S", 2)[:500]:
        assert T.term_size(denote(p, G)) == constructor_count(p)


def test_eval_agrees_with_denote_sampled_size4():
    rng = random.Random(11)
    size3 = naive_programs(G, "S", 3)
    size2 = naive_programs(G, "S", 2)
    size0 = naive_programs(G, "S", 0)
    conds = naive_programs(G, "C", 1)
    progs = []
    for _ in range(400):
        a, b = rng.choice(size3), rng.choice(size0)
        progs += [S("+", a, b), S("-", b, a), S("ite", rng.choice(conds), rng.choice(size2), b)]
    assert {size(p) for p in progs} == {4}
    for p in progs:
        for _ in range(5):
            a = {"x": rng.randint(-50, 50), "y": rng.randint(-50, 50)}
            assert eval_program(p, G, a) == T.evaluate(denote(p, G), a)


def test_visit_counter_bounded():
    for p in naive_programs(G, "S", 2):
        counter = VisitCounter()
        eval_program(p, G, {"x": 3, "y": -2}, counter)
        assert counter.count <= constructor_count(p)


def test_size_strictly_grows_with_parents():
    for p in naive_programs(G, "S", 2):
        for c in p.children:
            assert size(p) > size(c)


def test_express_inverts_denote():
    for k in range(3):
        for p in naive_programs(G, "S", k)[:300]:
            q = express(denote(p, G), G, "S")
            assert q is not None and denote(q, G) == denote(p, G)


def test_express_missing_operator():
    x, y = T.Var("x"), T.Var("y")
    # (< x y) is not (<= x y) and C has no way to spell it without not
    g = GrammarSpec(
        (
            Datatype("S", Sort.INT, (
                Constructor("x", (), VarDenotation("x")),
                Constructor("y", (), VarDenotation("y")),
            )),
            Datatype("C", Sort.BOOL, (Constructor("<=", ("S", "S"), OpDenotation(Op.LEQ)),)),
        ),
        "S",
        (("x", Sort.INT), ("y", Sort.INT)),
    )
    assert express(T.leq(x, y), g, "C") is not None
    assert express(T.lt(x, y), g, "C") is None


def test_ite_capability():
    assert G.ite_capable
    assert G.condition_datatype == "C"
    nullary = GrammarSpec(
        (Datatype("S", Sort.INT, (Constructor("0", (), ConstDenotation(0)),)),), "S", ()
    )
    assert not nullary.ite_capable
    assert nullary.max_program_size() == 0
    assert G.max_program_size() is None


@pytest.mark.parametrize(
    "ctors, message",
    [
        ((Constructor("z", (), VarDenotation("z")),), "not a parameter"),
        ((Constructor("+", ("S",), OpDenotation(Op.ADD)),), "arity"),
        ((Constructor("t", (), ConstDenotation(True)),), "sort"),
        ((Constructor("+", ("S", "S"), OpDenotation(Op.ADD)),), "no finite terms"),
        ((Constructor("+", ("S", "Q"), OpDenotation(Op.ADD)),), "unknown datatype"),
    ],
)
def test_grammar_validation(ctors, message):
    with pytest.raises(GrammarError, match=message):
        GrammarSpec((Datatype("S", Sort.INT, ctors),), "S", (("x", Sort.INT),))
