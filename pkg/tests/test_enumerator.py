import pytest

from oracles import max_property, naive_programs
from sygus_forge import terms as T
from sygus_forge.cegis import CounterexampleStore
from sygus_forge.enumerator import Enumerator, Layers, Stop, enumerate_layer
from sygus_forge.grammar import (
    ConstDenotation,
    Constructor,
    Datatype,
    GrammarSpec,
    VarDenotation,
    denote,
    example_grammar,
    size,
)
from sygus_forge.problem import Conjecture
from sygus_forge.terms import Sort

G = example_grammar()
XY = (("x", Sort.INT), ("y", Sort.INT))
NULLARY = GrammarSpec(
    (Datatype("S", Sort.INT, (
        Constructor("0", (), ConstDenotation(0)),
        Constructor("1", (), ConstDenotation(1)),
        Constructor("x", (), VarDenotation("x")),
        Constructor("y", (), VarDenotation("y")),
    )),),
    "S",
    XY,
)

# layer sizes of the two-variable max grammar, frozen from naive_programs
S_LAYERS = [4, 32, 1024, 35328]
C_LAYERS = [0, 32, 544, 21024]


class PointFilter:
    """Reference filter: evaluate the denoted program at each point."""

    def __init__(self, prop, points):
        self.prop = prop
        self.points = points
        self.epoch = 0

    def passes(self, p):
        body = denote(p, G)

        def fun(name, args):
            return T.evaluate(body, dict(zip(("x", "y"), args)))

        return all(T.evaluate(self.prop, a, fun) for a in self.points)

    def signature(self, p):
        return None


def test_layer_zero_and_one():
    assert [str(p) for p in enumerate_layer(G, "S", 0)] == ["0", "1", "x", "y"]
    layer1 = list(enumerate_layer(G, "S", 1))
    assert len(layer1) == 32
    assert {p.constructor for p in layer1} == {"+", "-"}


@pytest.mark.parametrize("k", range(4))
def test_layer_counts_frozen(k):
    assert len(naive_programs(G, "S", k)) == S_LAYERS[k]
    assert len(naive_programs(G, "C", k)) == C_LAYERS[k]
    assert sum(1 for _ in enumerate_layer(G, "S", k)) == S_LAYERS[k]
    assert sum(1 for _ in enumerate_layer(G, "C", k)) == C_LAYERS[k]


@pytest.mark.parametrize("k", range(4))
def test_layers_complete_and_unique(k):
    got = list(enumerate_layer(G, "S", k))
    assert len(set(got)) == len(got)
    assert set(got) == set(naive_programs(G, "S", k))
    assert all(size(p) == k for p in got)


def test_layer_order_deterministic():
    a = [str(p) for p in Layers(G).stream("S", 2)]
    b = [str(p) for p in Layers(G).stream("S", 2)]
    assert a == b


def test_empty_store_returns_first_declared():
    e = Enumerator(G)
    assert str(e.next_candidate(PointFilter(T.TRUE, []))) == "0"


def test_store_forces_size_two():
    points = [{"x": a, "y": b} for a, b in [(0, 1), (1, 0), (2, 0), (1, 1), (1, 2)]]
    e = Enumerator(G)
    p = e.next_candidate(PointFilter(max_property(), points))
    assert size(p) >= 2
    for a in points:
        assert T.evaluate(denote(p, G), a) == max(a["x"], a["y"])


def test_nullary_grammar_exhausts():
    prop = max_property()
    c = Conjecture("f", XY, Sort.INT, XY, prop, NULLARY)
    store = CounterexampleStore(c, NULLARY)
    e = Enumerator(NULLARY)
    seen = []
    while True:
        p = e.next_candidate(store)
        if p is Stop.EXHAUSTED:
            break
        seen.append(p)
        # refute with a point where the candidate differs from max
        for a, b in [(2, 3), (3, 2), (-1, -1), (5, 0), (0, 5)]:
            pt = {"x": a, "y": b}
            if not store.holds_at(p, pt) and pt not in store:
                store.add(pt, p)
                break
    assert e.examined == 4
    assert e.next_candidate(store) is Stop.EXHAUSTED


def test_cap_reached():
    e = Enumerator(G, max_size=1)
    never = PointFilter(T.FALSE, [{"x": 0, "y": 0}])
    assert e.next_candidate(never) is Stop.CAP_REACHED
    assert e.layer_counts == {0: 4, 1: 32}


def test_sizes_non_decreasing_and_filter_sound():
    points = [{"x": 0, "y": 1}, {"x": 1, "y": 0}]
    filt = PointFilter(max_property(), points)
    e = Enumerator(G, max_size=2)
    sizes = []
    for _ in range(30):
        p = e.next_candidate(filt)
        if isinstance(p, Stop):
            break
        sizes.append(size(p))
        assert filt.passes(p)
    assert sizes == sorted(sizes)
