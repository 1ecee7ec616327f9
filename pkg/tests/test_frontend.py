import pytest

from oracles import PROBLEMS
from sygus_forge import terms as T
from sygus_forge.frontend import ParseError, SortError, UnknownSymbol, parse, parse_term, print_problem, print_solution
from sygus_forge.grammar import example_grammar
from sygus_forge.terms import Sort

FIXTURES = sorted(PROBLEMS.glob("*.sl"))


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.name)
def test_round_trip(path):
    text = path.read_text()
    assert print_problem(parse(text)) == text


def test_round_trip_normalizes_layout():
    messy = """; comment
    (set-logic LIA) (synth-fun f ((x Int)) Int)
    (declare-var x Int)
    (constraint   (>= (f x) x))  (check-synth)"""
    canon = print_problem(parse(messy))
    assert canon == "(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (>= (f x) x))\n(check-synth)\n"
    assert print_problem(parse(canon)) == canon


def test_max_file():
    p = parse((PROBLEMS / "max.sl").read_text())
    c = p.conjecture()
    assert c.single_invocation
    assert len(p.constraints) == 3
    g = example_grammar()
    assert [d.name for d in p.grammar.datatypes] == [d.name for d in g.datatypes]
    assert [[c.denotation for c in d.constructors] for d in p.grammar.datatypes] == [
        [c.denotation for c in d.constructors] for d in g.datatypes
    ]


def test_two_synth_funs():
    with pytest.raises(ParseError) as e:
        parse((PROBLEMS / "bad" / "two_synth.sl").read_text())
    assert e.value.line == 3


def test_undeclared_variable():
    with pytest.raises(UnknownSymbol) as e:
        parse((PROBLEMS / "bad" / "undeclared.sl").read_text())
    assert (e.value.line, e.value.col) == (5, 25)


@pytest.mark.parametrize(
    "text, error",
    [
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (f x))\n(check-synth)", SortError),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (+ x true))\n(check-synth)", SortError),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(check-synth)", ParseError),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (= (f x) x)", ParseError),
        ("(set-logic BV)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (= (f x) x))\n(check-synth)", ParseError),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int ((S Int ((* S S) x))))\n(declare-var x Int)\n(constraint (= (f x) x))\n(check-synth)", UnknownSymbol),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int ((S Bool (true))))\n(declare-var x Int)\n(constraint (= (f x) x))\n(check-synth)", SortError),
        ("(set-logic LIA)\n(synth-fun f ((x Int)) Int)\n(declare-var x Int)\n(constraint (= (f x x) x))\n(check-synth)", SortError),
    ],
)
def test_errors(text, error):
    with pytest.raises(error):
        parse(text)


def test_parse_term_surface_forms():
    for text in ["(>= x y)", "(< x y)", "(> x (- 3))", "(=> (<= x y) (= x y))", "(ite (<= x 0) (- 0 x) x)"]:
        assert T.to_sexpr(parse_term(text)) == text
    assert parse_term("(- 3)") == T.IntConst(-3)


def test_print_solution():
    p = parse((PROBLEMS / "max.sl").read_text())
    x, y = T.Var("x"), T.Var("y")
    assert print_solution(p, T.ite(T.geq(x, y), x, y)) == "(define-fun f ((x Int) (y Int)) Int (ite (>= x y) x y))"


def test_bool_function():
    text = "(set-logic LIA)\n(synth-fun f ((x Int)) Bool)\n(declare-var x Int)\n(constraint (= (f x) (<= x 0)))\n(check-synth)\n"
    p = parse(text)
    assert p.result_sort is Sort.BOOL
    assert print_problem(p) == text
