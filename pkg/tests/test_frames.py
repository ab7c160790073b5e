from fractions import Fraction

import pytest

from jetframe.exterior import AmbientCoframe, DiffForm, FContext
from jetframe.expr import ONE, ZERO, NumericBinding, const, coord, fatom
from jetframe.frames import (connection, coordinate_metric, curvature, det, levi_civita,
                             lower_antisymmetry_residual, structure_constants)
from jetframe.errors import InternalConsistencyError
from jetframe.published import compare_connection, compare_curvature

x, y, p, q = (coord(c) for c in "xypq")
half = const(Fraction(1, 2))
quarter = const(Fraction(1, 4))


@pytest.fixture(scope="module")
def generic_table():
    return curvature(connection())


def test_structure_constants_generic():
    C = structure_constants(FContext())
    assert C.nonzero() == {(1, 0, 2): ONE, (2, 0, 3): ONE, (3, 0, 1): fatom("y"),
                           (3, 0, 2): fatom("p"), (3, 0, 3): fatom("q")}
    assert C(1, 2, 0) == -ONE


def test_structure_constants_special_f():
    assert structure_constants(FContext(ZERO)).nonzero() == {(1, 0, 2): ONE, (2, 0, 3): ONE}
    C = structure_constants(FContext(q))
    assert C(3, 0, 3) == ONE and C(3, 0, 1) == ZERO and C(3, 0, 2) == ZERO


def test_connection_examples():
    th = connection().theta
    assert th[1][0] == DiffForm.one_form([ZERO, ZERO, half, half * fatom("y")])
    assert th[0][1] == -th[1][0]
    assert th[2][3] == DiffForm.one_form([-half * (ONE - fatom("p")), ZERO, ZERO, ZERO])
    th0 = connection(FContext(ZERO)).theta
    assert th0[1][3].is_zero()
    assert th0[2][3] == DiffForm.one_form([-half, ZERO, ZERO, ZERO])


def test_connection_residuals_vanish():
    for f in (None, ZERO, q, p * q + y):
        conn = connection(FContext(f) if f is not None else None)
        assert conn.antisymmetry_residual() == []
        assert all(r.is_zero() for r in conn.torsion_residual())


def test_levi_civita_detects_inconsistent_constants():
    C = structure_constants(FContext())
    doubled = type(C)(tuple(tuple(tuple(v * 2 for v in r) for r in m) for m in C.C))
    with pytest.raises(InternalConsistencyError):
        levi_civita(doubled, AmbientCoframe())


def test_published_connection_matches():
    assert all(ok for _, ok in compare_connection(connection()))


def test_curvature_examples(generic_table):
    assert generic_table.component(1, 2, 1, 2) == quarter
    assert generic_table.component(0, 1, 1, 3) == -half * fatom("y", "y")
    R0 = curvature(connection(FContext(ZERO)))
    assert R0.component(0, 3, 0, 3) == const(Fraction(-3, 4))


def test_curvature_symmetries(generic_table):
    assert generic_table.bianchi_residual() == {}
    assert lower_antisymmetry_residual(generic_table) == []
    for (i, j, k, l), v in generic_table.R.items():
        assert generic_table.component(i, j, l, k) == -v


def test_published_curvature_mismatches_are_exactly_three(generic_table):
    bad = [c.label() for c in compare_curvature(generic_table) if not c.matches]
    assert bad == ["R^1_314", "R^1_413", "R^2_434"]
    assert sum(1 for c in compare_curvature(generic_table) if c.matches) == 27


def test_metric():
    g = coordinate_metric()
    f = fatom()
    assert g[0, 0] == 1 + p ** 2 + q ** 2 + f ** 2
    assert g[0, 3] == -f and g[3, 3] == ONE
    assert g.is_symmetric() and g.determinant() == ONE
    g0 = coordinate_metric(FContext(ZERO))
    ident = [[g0[i, j].evaluate(NumericBinding()) for j in range(4)] for i in range(4)]
    assert ident == [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]


def test_det_small():
    assert det([[x, y], [p, q]]) == x * q - y * p
