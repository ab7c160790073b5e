"""Independent numeric checks in the coordinate basis.

Nothing here reads a symbolic connection or curvature form.  The only shared
input is the coordinate metric; Christoffel symbols and the Riemann tensor are
rebuilt from it by central differences (or by exact metric partials in the
``analytic`` mode) and then moved into the orthonormal frame for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import SingularPointError
from .exterior import AmbientCoframe, FContext
from .expr import COORDS, NumericBinding, ScalarExpr
from .frames import CurvatureTable, MetricMatrix, coordinate_metric

MODES = ("fd", "analytic")
ROUNDOFF_FLOOR = 1e-10


@dataclass
class SamplePoint:
    x: float
    y: float
    p: float
    q: float
    binding: NumericBinding

    @property
    def coords(self) -> Tuple[float, float, float, float]:
        return (self.x, self.y, self.p, self.q)

    @classmethod
    def at(cls, template: NumericBinding, x: float, y: float, p: float, q: float) -> "SamplePoint":
        return cls(x, y, p, q, template.at(x=x, y=y, p=p, q=q))

    def moved(self, coords: Sequence[float]) -> NumericBinding:
        return self.binding.at(**dict(zip(COORDS, (float(c) for c in coords))))


def sample_points(template: NumericBinding, n: int, seed: int = 0,
                  box: Tuple[float, float] = (-1.0, 1.0),
                  accept: Optional[Callable[[SamplePoint], object]] = None,
                  max_tries: int = 1000) -> List[SamplePoint]:
    """Draw ``n`` points uniformly from ``box^4``.

    ``accept`` is called on each candidate; a SingularPointError from it
    rejects the point and another one is drawn.
    """
    rng = np.random.default_rng(seed)
    out: List[SamplePoint] = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise SingularPointError(f"could not find {n} regular sample points")
        c = rng.uniform(box[0], box[1], size=4)
        pt = SamplePoint.at(template, *map(float, c))
        if accept is not None:
            try:
                accept(pt)
            except SingularPointError:
                continue
        out.append(pt)
    return out


# -- metric and its derivatives ------------------------------------------------------

def metric_numeric(g: MetricMatrix, binding: NumericBinding) -> np.ndarray:
    n = len(g.g)
    return np.array([[g.g[a][b].evaluate(binding) for b in range(n)] for a in range(n)])


def _metric_partials_fd(g: MetricMatrix, pt: SamplePoint, coords, h: float) -> np.ndarray:
    """``dg[c, a, b] = d_c g_ab`` by central differences around ``coords``."""
    n = len(g.g)
    out = np.empty((n, n, n))
    for c in range(n):
        up = list(coords)
        dn = list(coords)
        up[c] += h
        dn[c] -= h
        out[c] = (metric_numeric(g, pt.moved(up)) - metric_numeric(g, pt.moved(dn))) / (2 * h)
    return out


class _AnalyticMetric:
    """Exact first and second metric partials, evaluated numerically."""

    def __init__(self, g: MetricMatrix):
        n = len(g.g)
        self.n = n
        self.g = g
        self.d1 = [[[g.g[a][b].partial(COORDS[c], strict=False) for b in range(n)] for a in range(n)]
                   for c in range(n)]
        self.d2 = [[[[self.d1[c][a][b].partial(COORDS[e], strict=False) for b in range(n)]
                     for a in range(n)] for c in range(n)] for e in range(n)]

    def values(self, binding: NumericBinding):
        n = self.n
        g = metric_numeric(self.g, binding)
        dg = np.array([[[self.d1[c][a][b].evaluate(binding) for b in range(n)] for a in range(n)]
                       for c in range(n)])
        ddg = np.array([[[[self.d2[e][c][a][b].evaluate(binding) for b in range(n)] for a in range(n)]
                         for c in range(n)] for e in range(n)])
        return g, dg, ddg


_ANALYTIC_CACHE: Dict[int, _AnalyticMetric] = {}


def _analytic(g: MetricMatrix) -> _AnalyticMetric:
    key = id(g)
    hit = _ANALYTIC_CACHE.get(key)
    if hit is None or hit.g is not g:
        hit = _AnalyticMetric(g)
        _ANALYTIC_CACHE[key] = hit
    return hit


def _christoffel_from(ginv: np.ndarray, dg: np.ndarray) -> np.ndarray:
    # T[d, b, c] = d_b g_dc + d_c g_db - d_d g_bc
    T = np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg
    return 0.5 * np.einsum("ad,dbc->abc", ginv, T)


def _check_finite(arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise SingularPointError("non-finite value in numeric geometry")
    return arr


def christoffel_numeric(g: MetricMatrix, pt: SamplePoint, mode: str = "fd",
                        h: Optional[float] = None) -> np.ndarray:
    """``Gamma[a, b, c]`` of the coordinate Levi-Civita connection at ``pt``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "analytic":
        gm, dg, _ = _analytic(g).values(pt.binding)
    else:
        h = pt.binding.h_fd if h is None else h
        gm = metric_numeric(g, pt.binding)
        dg = _metric_partials_fd(g, pt, pt.coords, h)
    return _check_finite(_christoffel_from(np.linalg.inv(gm), dg))


def _christoffel_at(g: MetricMatrix, pt: SamplePoint, coords, h: float) -> np.ndarray:
    gm = metric_numeric(g, pt.moved(coords))
    dg = _metric_partials_fd(g, pt, coords, h)
    return _christoffel_from(np.linalg.inv(gm), dg)


def riemann_numeric(g: MetricMatrix, pt: SamplePoint, mode: str = "fd") -> np.ndarray:
    """Coordinate ``R[a, b, c, d] = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb``."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    n = len(g.g)
    if mode == "analytic":
        gm, dg, ddg = _analytic(g).values(pt.binding)
        ginv = np.linalg.inv(gm)
        Gam = _christoffel_from(ginv, dg)
        # d_e Gamma^a_bc = 1/2 d_e(g^ad) T_dbc + 1/2 g^ad d_e T_dbc
        T = np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg
        dT = np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg) - ddg
        dginv = -np.einsum("ad,edf,fb->eab", ginv, dg, ginv)
        dGam = 0.5 * (np.einsum("ead,dbc->eabc", dginv, T) + np.einsum("ad,edbc->eabc", ginv, dT))
    else:
        h = pt.binding.h_fd
        Gam = _christoffel_at(g, pt, pt.coords, h)
        dGam = np.empty((n, n, n, n))
        for e in range(n):
            up = list(pt.coords)
            dn = list(pt.coords)
            up[e] += h
            dn[e] -= h
            dGam[e] = (_christoffel_at(g, pt, up, h) - _christoffel_at(g, pt, dn, h)) / (2 * h)
    R = (np.einsum("cadb->abcd", dGam) - np.einsum("dacb->abcd", dGam)
         + np.einsum("ace,edb->abcd", Gam, Gam) - np.einsum("ade,ecb->abcd", Gam, Gam))
    return _check_finite(R)


def bianchi_residual_numeric(R: np.ndarray) -> float:
    """Largest cyclic sum ``R^a_bcd + R^a_cdb + R^a_dbc``."""
    cyc = R + np.einsum("acdb->abcd", R) + np.einsum("adbc->abcd", R)
    return float(np.max(np.abs(cyc)))


def antisymmetry_residual_numeric(R: np.ndarray) -> float:
    return float(np.max(np.abs(R + np.einsum("abdc->abcd", R))))


# -- frame transport -----------------------------------------------------------------

def frame_matrices(fctx: Optional[FContext], binding: NumericBinding) -> Tuple[np.ndarray, np.ndarray]:
    """Numeric (W, E): rows of W are the coframe, columns of E the frame."""
    cf = AmbientCoframe(fctx)
    W = np.array([[e.evaluate(binding) for e in row] for row in cf.coordinate_matrix()])
    E = np.array([[e.evaluate(binding) for e in row] for row in cf.frame_matrix()])
    return W, E


def to_frame(R_coord: np.ndarray, W: np.ndarray, E: np.ndarray) -> np.ndarray:
    """``R^i_jkl = W^i_a R^a_bcd E^b_j E^c_k E^d_l``."""
    return np.einsum("ia,abcd,bj,ck,dl->ijkl", W, R_coord, E, E, E)


@dataclass
class ComparisonReport:
    quantity: str
    symbolic: float
    oracle: float
    abs_error: float
    rel_error: float
    tolerance: float

    @property
    def verdict(self) -> str:
        return "pass" if self.abs_error <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def as_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "symbolic": self.symbolic,
            "oracle": self.oracle,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


def compare_value(name: str, symbolic: float, oracle: float, tol: float) -> ComparisonReport:
    err = abs(symbolic - oracle)
    rel = err / max(abs(oracle), 1e-300) if oracle != 0 else (0.0 if err == 0 else math.inf)
    return ComparisonReport(name, float(symbolic), float(oracle), float(err), float(rel), tol)


def component_name(key: Tuple[int, int, int, int]) -> str:
    i, j, k, l = key
    return f"R^{i + 1}_{j + 1}{k + 1}{l + 1}"


def frame_compare(table: CurvatureTable, R_coord: np.ndarray, fctx: Optional[FContext],
                  pt: SamplePoint, tol: float = 1e-5,
                  keys: Optional[Iterable[Tuple[int, int, int, int]]] = None,
                  overrides: Optional[Dict[Tuple[int, int, int, int], ScalarExpr]] = None
                  ) -> List[ComparisonReport]:
    """Entrywise comparison of a symbolic frame table with the transported oracle table.

    ``keys`` are 0-based (i, j, k<l); default is every component with i < j.
    ``overrides`` replaces selected symbolic values (used to test a published claim).
    """
    W, E = frame_matrices(fctx, pt.binding)
    Rf = to_frame(R_coord, W, E)
    n = table.size
    if keys is None:
        keys = [(i, j, k, l) for i in range(n) for j in range(i + 1, n)
                for k in range(n) for l in range(k + 1, n)]
    out = []
    for key in sorted(keys):
        expr = overrides[key] if overrides and key in overrides else table.component(*key)
        out.append(compare_value(component_name(key), expr.evaluate(pt.binding), Rf[key], tol))
    return sorted(out, key=lambda r: r.quantity)


def richardson_ratios(g: MetricMatrix, pt: SamplePoint,
                      entries: Optional[Sequence[Tuple[int, int, int]]] = None,
                      h: float = 1e-2, count: int = 5) -> Tuple[List[Tuple[int, int, int]], List[float]]:
    """Error ratio of FD Christoffel entries at steps ``h`` and ``h/2`` against exact values.

    Without ``entries`` the ``count`` entries with the largest error at step ``h``
    are used, skipping any whose error is at roundoff level: a metric that is
    quadratic along each coordinate is differenced exactly, and then there is
    no truncation error to scale.
    """
    exact = christoffel_numeric(g, pt, mode="analytic")
    coarse = christoffel_numeric(g, pt, mode="fd", h=h)
    fine = christoffel_numeric(g, pt, mode="fd", h=h / 2)
    err_c = np.abs(coarse - exact)
    if entries is None:
        floor = ROUNDOFF_FLOOR * max(1.0, float(np.max(np.abs(exact))))
        order = [k for k in np.argsort(-err_c, axis=None, kind="stable") if err_c.flat[k] > floor][:count]
        entries = [tuple(int(i) for i in np.unravel_index(k, err_c.shape)) for k in order]
    out = []
    for e in entries:
        ef = abs(fine[e] - exact[e])
        out.append(float(err_c[e] / ef) if ef > 0 else math.inf)
    return list(entries), out


# -- submanifold -------------------------------------------------------------------------

def _frame_on_section(Q: ScalarExpr, Qy: ScalarExpr, f: ScalarExpr, z: Sequence[float]) -> np.ndarray:
    """Columns: adapted frame (e1, (e2 + Q_y e4)/s, e3, n) in coordinates at the lifted point."""
    x, y, p = (float(v) for v in z)
    b = NumericBinding(x=x, y=y, p=p)
    qv = Q.evaluate(b)
    b = b.at(q=qv)
    qy = Qy.evaluate(b)
    fv = f.evaluate(b)
    s = math.sqrt(1.0 + qy * qy)
    e1 = np.array([1.0, p, qv, fv])
    e2 = np.array([0.0, 1.0, 0.0, 0.0])
    e3 = np.array([0.0, 0.0, 1.0, 0.0])
    e4 = np.array([0.0, 0.0, 0.0, 1.0])
    return np.column_stack([e1, (e2 + qy * e4) / s, e3, (-qy * e2 + e4) / s])


def second_fundamental_numeric(Q: ScalarExpr, f: ScalarExpr, z: Sequence[float], h: float = 1e-5,
                               mode: str = "analytic") -> np.ndarray:
    """``h_ij = g(nabla_{e~_j} e~_i, n)`` from coordinate Christoffels along ``q = Q(x, y, p)``.

    ``f`` must be a concrete right-hand side compatible with the section.
    """
    fctx = FContext(f)
    g = coordinate_metric(fctx)
    Qy = Q.partial("y", strict=False)
    F0 = _frame_on_section(Q, Qy, f, z)
    x, y, p = (float(v) for v in z)
    qv = Q.evaluate(NumericBinding(x=x, y=y, p=p))
    pt = SamplePoint.at(NumericBinding(), x, y, p, qv)
    G = metric_numeric(g, pt.binding)
    if np.max(np.abs(F0.T @ G @ F0 - np.eye(4))) > 1e-9:
        raise SingularPointError("adapted frame is not orthonormal here")
    b = pt.binding
    dQ = np.array([Q.partial(c, strict=False).evaluate(b) for c in "xyp"])
    if np.max(np.abs(F0[3, :3] - dQ @ F0[:3, :3])) > 1e-9:
        raise ValueError("e1 is not tangent to the section; f is not compatible with it")
    Gam = christoffel_numeric(g, pt, mode=mode)
    dF = []
    for b in range(3):
        up = list(z)
        dn = list(z)
        up[b] += h
        dn[b] -= h
        dF.append((_frame_on_section(Q, Qy, f, up) - _frame_on_section(Q, Qy, f, dn)) / (2 * h))
    n = F0[:, 3]
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            X, Y = F0[:, j], F0[:, i]
            nab = sum(X[b] * dF[b][:, i] for b in range(3)) + np.einsum("abc,b,c->a", Gam, X, Y)
            out[i, j] = float(nab @ G @ n)
    return out


def gauss_residual_numeric(Q: ScalarExpr, f: ScalarExpr, z: Sequence[float], h: float = 1e-5) -> float:
    """Largest ``|R_ijkl - R~_ijkl + h_ik h_jl - h_il h_jk|`` over tangent indices at ``z``.

    The ambient tensor comes from the 4D coordinate metric, the induced one from
    the pulled-back 3D metric in (x, y, p), and ``h`` from
    :func:`second_fundamental_numeric`; no symbolic connection is consulted.
    """
    fctx = FContext(f)
    g = coordinate_metric(fctx)
    x, y, p = (float(v) for v in z)
    qv = Q.evaluate(NumericBinding(x=x, y=y, p=p))
    pt = SamplePoint.at(NumericBinding(), x, y, p, qv)
    F0 = _frame_on_section(Q, Q.partial("y", strict=False), f, z)
    G = metric_numeric(g, pt.binding)
    R4 = riemann_numeric(g, pt, mode="analytic")
    amb = np.einsum("ei,ea,abcd,bj,ck,dl->ijkl", F0, G, R4, F0, F0, F0)[:3, :3, :3, :3]

    J = [[ScalarExpr.const(int(a == b)) for b in range(3)] for a in range(3)]
    J.append([Q.partial(c, strict=False) for c in "xyp"])
    gq = [[v.subs({"q": Q}) for v in row] for row in g.g]
    g3 = []
    for a in range(3):
        row = []
        for b in range(3):
            acc = ScalarExpr.const(0)
            for c in range(4):
                for d in range(4):
                    if J[c][a].is_zero() or J[d][b].is_zero() or gq[c][d].is_zero():
                        continue
                    acc = acc + J[c][a] * gq[c][d] * J[d][b]
            row.append(acc)
        g3.append(tuple(row))
    g3 = MetricMatrix(tuple(g3))
    R3 = riemann_numeric(g3, pt, mode="analytic")
    T = F0[:3, :3]
    ind = np.einsum("ei,ea,abcd,bj,ck,dl->ijkl", T, metric_numeric(g3, pt.binding), R3, T, T, T)

    hh = second_fundamental_numeric(Q, f, z, h=h)
    res = amb - ind + np.einsum("ik,jl->ijkl", hh, hh) - np.einsum("il,jk->ijkl", hh, hh)
    return float(np.max(np.abs(res)))
