import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import binding_values, polynomials, trees
from jetframe.errors import InvalidDirectionError, MalformedExpressionError, MissingBindingError
from jetframe.expr import (FunctionAtom, NumericBinding, callable_of, const, coord, fatom,
                           qatom, radical, s, simplify)

x, y, p, q = (coord(c) for c in "xypq")
Qy = qatom("y")


def test_s_squared_minus_qy_squared():
    assert s() ** 2 - Qy ** 2 == const(1)


def test_commutativity_cancels():
    assert fatom("y") * fatom("p") - fatom("p") * fatom("y") == const(0)


def test_rational_normalization():
    e = (1 - Qy ** 2) / (1 + Qy ** 2) + 2 * Qy ** 2 / (1 + Qy ** 2)
    assert e == const(1)


def test_atom_multi_index_is_sorted():
    assert FunctionAtom("F", ("y", "p")) == FunctionAtom("F", ("p", "y"))
    assert fatom("p", "y").render() == "f_yp"


def test_atom_argument_sets():
    with pytest.raises(InvalidDirectionError):
        FunctionAtom("Q", ("q",))
    with pytest.raises(InvalidDirectionError):
        FunctionAtom("Alpha", ("y",))


def test_partial_examples():
    assert fatom().partial("y") == fatom("y")
    assert (x * y).partial("p") == const(0)
    assert s().partial("y") == Qy * qatom("y", "y") / s()


def test_partial_of_s_matches_finite_differences():
    Q = y ** 3 + x * y
    d = s().partial("y")
    b = NumericBinding(x=0.3, y=-0.4, section=Q)
    h = 1e-6
    num = (s().evaluate(b.at(y=-0.4 + h)) - s().evaluate(b.at(y=-0.4 - h))) / (2 * h)
    assert d.evaluate(b) == pytest.approx(num, abs=1e-8)


def test_strict_partial_rejects_section_atoms_with_q():
    with pytest.raises(InvalidDirectionError):
        Qy.partial("q")
    assert Qy.partial("q", strict=False) == const(0)


def test_eval_examples():
    b = NumericBinding(y=1.0, section=y ** 2)
    assert (1 + Qy ** 2).evaluate(b) == pytest.approx(5.0)
    assert s().evaluate(NumericBinding(y=0.0, section=y ** 2)) == pytest.approx(1.0)


def test_eval_f_partial_through_finite_differences():
    fn = callable_of(x * q)
    for pt in [(0.5, -0.2, 0.7, 0.1), (-0.9, 0.4, 0.0, 0.3)]:
        b = NumericBinding(*pt, f=fn)
        assert fatom("p").evaluate(b) == pytest.approx(0.0, abs=1e-6)
        assert fatom("q").evaluate(b) == pytest.approx(pt[0], abs=1e-6)


def test_missing_binding():
    with pytest.raises(MissingBindingError):
        fatom().evaluate(NumericBinding())


def test_h_fd_bounds():
    with pytest.raises(ValueError):
        NumericBinding(h_fd=1e-2)


def test_division_by_zero_polynomial():
    with pytest.raises(MalformedExpressionError):
        x / (x - x)


def test_radical_rejects_perfect_square():
    assert radical(const(Fraction(9, 4))) == const(Fraction(3, 2))
    with pytest.raises(MalformedExpressionError):
        radical((1 + x) ** 2)


def test_simplify_tree():
    assert simplify(("+", ("*", "x", "y"), ("-", ("*", "y", "x")))) == const(0)
    assert simplify(("^", "s", 2)) == 1 + Qy ** 2
    with pytest.raises(MalformedExpressionError):
        simplify(("?", 1))


def test_render_is_deterministic():
    e = (p ** 2 * fatom("x", "q") + 3) / (1 + Qy)
    assert e.render() == ((3 + fatom("q", "x") * p ** 2) / (Qy + 1)).render()


# -- properties ----------------------------------------------------------------------------

def _binding(vals):
    return NumericBinding(*vals, f=x * x + y * q - p, section=x * y + y ** 2)


@settings(max_examples=40)
@given(trees)
def test_simplify_idempotent(t):
    e = simplify(t)
    assert simplify(e) == e
    assert simplify(e).render() == e.render()


@settings(max_examples=40)
@given(trees, trees, binding_values())
def test_eval_of_symmetric_product(t1, t2, vals):
    e1, e2 = simplify(t1), simplify(t2)
    b = _binding(vals)
    lhs = simplify(("+", ("*", e1, e2), ("*", e2, e1))).evaluate(b)
    rhs = 2 * e1.evaluate(b) * e2.evaluate(b)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@settings(max_examples=40)
@given(polynomials(with_f=True), st.sampled_from("xypq"), st.sampled_from("xypq"))
def test_partials_commute(e, a, b):
    assert e.partial(a).partial(b) == e.partial(b).partial(a)


@settings(max_examples=40)
@given(trees)
def test_partials_commute_on_trees(t):
    e = simplify(t)
    assert e.partial("x", strict=False).partial("y", strict=False) == \
        e.partial("y", strict=False).partial("x", strict=False)


@given(st.integers(-6, 6))
def test_s_powers_reduce(n):
    e = s() ** n
    assert e.has_radical == (n % 2 == 1)
    # even powers are rewritten away; odd ones keep a single factor of s
    assert not e.radical_part.has_radical
    assert e == e.rational_part + e.radical_part * s()


@settings(max_examples=40)
@given(trees)
def test_s_exponent_after_rewrite(t):
    e = simplify(t)
    assert not e.rational_part.has_radical and not e.radical_part.has_radical
    assert e == e.rational_part + e.radical_part * s()
    assert "s^" not in e.render()


@settings(max_examples=30)
@given(polynomials(), binding_values())
def test_eval_matches_callable(e, vals):
    assert e.evaluate(NumericBinding(*vals)) == pytest.approx(callable_of(e)(*vals))


def test_eval_of_pole_raises():
    from jetframe.errors import SingularPointError
    with pytest.raises(SingularPointError):
        (1 / x).evaluate(NumericBinding(x=0.0))
    assert math.isfinite((1 / x).evaluate(NumericBinding(x=0.5)))
