import pytest
from hypothesis import given, settings

from conftest import trees
from jetframe.errors import ParseError
from jetframe.expr import alpha, beta, coord, fatom, qatom, radical, s, simplify
from jetframe.parser import parse, tokenize

x, y, p, q = (coord(c) for c in "xypq")


def test_examples():
    assert parse("y^2") == y * y
    assert parse("alpha(x)*y + beta(x)") == alpha() * y + beta()
    assert parse("generic") == fatom()


def test_atoms_and_functions():
    assert parse("f_py") == fatom("y", "p")
    assert parse("Q_xy * s") == qatom("x", "y") * s()
    assert parse("alpha_xx(x) - beta_x(x)") == alpha(2) - beta(1)
    assert parse("sqrt(1 + x^2)") == radical(1 + x ** 2)


def test_precedence_and_unary_minus():
    assert parse("1 + 2*x^2") == 1 + 2 * x ** 2
    assert parse("-x^2") == -(x ** 2)
    assert parse("x^-2") == 1 / x ** 2
    assert parse("x/y/p") == x / (y * p)
    assert parse("2 - 3 - 4") == parse("-5")
    assert parse("1.5*x") == 3 * x / 2


@pytest.mark.parametrize("text,line,col,msg", [
    ("q/(1+p", 1, 7, "expected ')'"),
    ("x + foo", 1, 5, "unknown identifier"),
    ("alpha(y)", 1, 7, "only the argument x"),
    ("beta(x + 1)", 1, 8, "expected ')'"),
    ("x +\n  * y", 2, 3, "unexpected '*'"),
    ("x $ y", 1, 3, "unexpected character"),
    ("x^y", 1, 3, "integer"),
    ("", 1, 1, "empty"),
    ("f_z", 1, 1, "unknown identifier"),
    ("Q_q", 1, 1, "does not depend on q"),
    ("1/(x - x)", 1, 2, "division by zero"),
])
def test_errors(text, line, col, msg):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert (err.value.line, err.value.column) == (line, col)
    assert msg in str(err.value)
    assert f"line {line}, column {col}" in str(err.value)


def test_tokenizer_positions():
    toks = tokenize("x*\n (y)")
    assert [(t.text, t.line, t.column) for t in toks[:-1]] == [
        ("x", 1, 1), ("*", 1, 2), ("(", 2, 2), ("y", 2, 3), (")", 2, 4)]


@settings(max_examples=60)
@given(trees)
def test_round_trip(t):
    e = simplify(t)
    assert parse(e.render()) == e


@settings(max_examples=30)
@given(trees)
def test_round_trip_of_rendered_text_is_stable(t):
    text = simplify(t).render()
    assert parse(text).render() == text
