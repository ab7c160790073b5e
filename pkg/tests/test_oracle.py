from fractions import Fraction

import numpy as np
import pytest

from jetframe import oracle
from jetframe.errata import WITNESS_F, WITNESS_Q
from jetframe.errors import SingularPointError
from jetframe.exterior import FContext
from jetframe.expr import NumericBinding, ScalarExpr, const, coord
from jetframe.frames import connection, coordinate_metric, curvature
from jetframe.oracle import (SamplePoint, antisymmetry_residual_numeric, bianchi_residual_numeric,
                             christoffel_numeric, compare_value, frame_compare, gauss_residual_numeric,
                             richardson_ratios, riemann_numeric, sample_points, second_fundamental_numeric)
from jetframe.surface import Section, classify

x, y, p, q = (coord(c) for c in "xypq")
CONCRETE = {"zero": ScalarExpr.const(0), "q": q, "pq+y": p * q + y}


def _table(f):
    fctx = FContext(f)
    return fctx, curvature(connection(fctx)), coordinate_metric(fctx)


def test_christoffel_flat_point_by_hand():
    # f = 0 at p = q = 0: g = I and the only nonzero first partials are
    # d_p g_xy = d_q g_xp = -1, which gives these six symbols (up to b <-> c)
    g = coordinate_metric(FContext(const(0)))
    pt = SamplePoint.at(NumericBinding(), 0.3, -0.2, 0.0, 0.0)
    expected = np.zeros((4, 4, 4))
    for (a, b, c), v in {(0, 1, 2): -0.5, (0, 2, 3): -0.5, (1, 0, 2): -0.5,
                         (2, 0, 3): -0.5, (2, 0, 1): 0.5, (3, 0, 2): 0.5}.items():
        expected[a, b, c] = expected[a, c, b] = v
    for mode in ("fd", "analytic"):
        assert np.max(np.abs(christoffel_numeric(g, pt, mode=mode) - expected)) < 1e-6


def test_christoffel_symmetric():
    g = coordinate_metric(FContext(p * q + y))
    pt = SamplePoint.at(NumericBinding(), 0.1, 0.5, -0.3, 0.7)
    G = christoffel_numeric(g, pt)
    assert np.max(np.abs(G - np.einsum("abc->acb", G))) < 1e-15


def test_constant_metric_direction():
    g = coordinate_metric(FContext(p * q + y))
    pt = SamplePoint.at(NumericBinding(), 0.1, 0.5, -0.3, 0.7)
    dg = oracle._metric_partials_fd(g, pt, pt.coords, 1e-4)
    assert abs(dg[1, 3, 3]) < 1e-9


@pytest.mark.parametrize("name", sorted(CONCRETE))
@pytest.mark.parametrize("mode,tol", [("fd", 1e-5), ("analytic", 1e-9)])
def test_frame_sweep(name, mode, tol):
    fctx, table, g = _table(CONCRETE[name])
    for pt in sample_points(NumericBinding(), 10, seed=3):
        R = riemann_numeric(g, pt, mode=mode)
        assert antisymmetry_residual_numeric(R) < 1e-5
        assert bianchi_residual_numeric(R) < 1e-5
        reports = frame_compare(table, R, fctx, pt, tol)
        assert len(reports) == 36
        assert all(r.passed for r in reports), [r.as_dict() for r in reports if not r.passed]


def test_r2323_quarter_and_perturbation():
    fctx, table, g = _table(const(0))
    pt = sample_points(NumericBinding(), 1, seed=5)[0]
    R = riemann_numeric(g, pt)
    key = (1, 2, 1, 2)
    good = frame_compare(table, R, fctx, pt, 1e-5, [key])[0]
    assert good.quantity == "R^2_323" and good.passed
    assert good.symbolic == pytest.approx(0.25)
    bad = frame_compare(table, R, fctx, pt, 1e-5, [key], {key: const(Fraction(1, 3))})[0]
    assert bad.verdict == "fail"


def test_comparison_report_verdict():
    assert compare_value("a", 1.0, 1.0 + 1e-6, 1e-6).verdict == "pass"
    assert compare_value("a", 1.0, 1.0 + 2e-6, 1e-6).verdict == "fail"
    d = compare_value("a", 1.0, 0.5, 0.1).as_dict()
    assert d["rel_error"] == pytest.approx(1.0)


def test_results_sorted_by_name():
    fctx, table, g = _table(q)
    pt = sample_points(NumericBinding(), 1, seed=0)[0]
    names = [r.quantity for r in frame_compare(table, riemann_numeric(g, pt), fctx, pt)]
    assert names == sorted(names)


def test_richardson_ratio_near_four():
    f = p ** 2 + y * q + x * p * q + q ** 3 + x * y * p
    g = coordinate_metric(FContext(f))
    for pt in sample_points(NumericBinding(), 3, seed=1):
        entries, ratios = richardson_ratios(g, pt)
        assert len(entries) == 5
        assert all(abs(r - 4.0) < 0.05 for r in ratios), ratios


def test_richardson_skips_exactly_differenced_metric():
    g = coordinate_metric(FContext(p * q + y))
    entries, ratios = richardson_ratios(g, sample_points(NumericBinding(), 1)[0])
    assert entries == [] and ratios == []


def test_sample_points_resample_on_singularity():
    def reject_negative_x(pt):
        if pt.x < 0:
            raise SingularPointError("x < 0")
    pts = sample_points(NumericBinding(), 8, seed=2, accept=reject_negative_x)
    assert len(pts) == 8 and all(pt.x >= 0 for pt in pts)
    again = sample_points(NumericBinding(), 8, seed=2, accept=reject_negative_x)
    assert [pt.coords for pt in pts] == [pt.coords for pt in again]


def test_oracle_is_independent_of_symbolic_connection():
    assert not hasattr(oracle, "connection") and not hasattr(oracle, "curvature")
    assert not hasattr(oracle, "levi_civita")


def test_second_fundamental_numeric_matches_engine():
    rep = classify(Section.from_expr(WITNESS_Q), FContext(WITNESS_F))
    for z in [(0.2, -0.5, 0.4), (-0.7, 0.3, 0.9)]:
        b = NumericBinding(*z)
        engine = np.array([[v.evaluate(b) for v in row] for row in rep.h])
        assert np.max(np.abs(engine - second_fundamental_numeric(WITNESS_Q, WITNESS_F, z))) < 1e-8


def test_second_fundamental_numeric_rejects_incompatible_f():
    with pytest.raises(ValueError):
        second_fundamental_numeric(y ** 2, p, (0.1, 0.2, 0.3))


def test_gauss_residual_numeric_generic_branch():
    rng = np.random.default_rng(11)
    for _ in range(4):
        z = rng.uniform(-1, 1, size=3)
        assert gauss_residual_numeric(WITNESS_Q, WITNESS_F, z) < 1e-8
