"""Connection and curvature of an orthonormal coframe.

The connection is obtained from the structure constants of the coframe by a
closed formula and then checked against the first structure equation, so a
wrong table can never leave this module silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .errors import InternalConsistencyError
from .exterior import AmbientCoframe, Coframe, DiffForm, FContext, wedge
from .expr import ONE, ZERO, ScalarExpr, const


@dataclass(frozen=True)
class StructureConstants:
    """``d w^i = sum_{j<k} C[i][j][k] w^j ^ w^k``, stored as a dense antisymmetric array."""

    C: Tuple[Tuple[Tuple[ScalarExpr, ...], ...], ...]

    @property
    def size(self) -> int:
        return len(self.C)

    def __call__(self, i: int, j: int, k: int) -> ScalarExpr:
        return self.C[i][j][k]

    def nonzero(self) -> Dict[Tuple[int, int, int], ScalarExpr]:
        """Entries with ``j < k`` that are not identically zero (0-based)."""
        n = self.size
        return {(i, j, k): self.C[i][j][k]
                for i in range(n) for j, k in combinations(range(n), 2)
                if not self.C[i][j][k].is_zero()}


def structure_constants(coframe) -> StructureConstants:
    """Read the structure constants off ``d`` of each basis 1-form.

    ``coframe`` is a :class:`Coframe` or an :class:`FContext` (ambient case).
    """
    if not isinstance(coframe, Coframe):
        coframe = AmbientCoframe(coframe)
    n = coframe.basis.size
    C = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        dw = coframe.d(DiffForm.basis_form(i, coframe.basis))
        for (j, k), c in dw.terms.items():
            C[i][j][k] = c
            C[i][k][j] = -c
    return StructureConstants(tuple(tuple(tuple(r) for r in m) for m in C))


class ConnectionMatrix:
    """Antisymmetric matrix of 1-forms; ``theta[i][j]`` is the upper-i, lower-j entry."""

    def __init__(self, theta: List[List[DiffForm]], coframe: Coframe):
        self.theta = [list(row) for row in theta]
        self.coframe = coframe

    @property
    def size(self) -> int:
        return len(self.theta)

    def __getitem__(self, ij):
        i, j = ij
        return self.theta[i][j]

    def antisymmetry_residual(self) -> List[Tuple[int, int]]:
        """Index pairs where ``theta^i_j + theta^j_i`` is not zero."""
        n = self.size
        return [(i, j) for i in range(n) for j in range(i, n)
                if not (self.theta[i][j] + self.theta[j][i]).is_zero()]

    def torsion_residual(self) -> List[DiffForm]:
        """``d w^i + sum_j theta^i_j ^ w^j`` for each i."""
        cf = self.coframe
        out = []
        for i in range(self.size):
            r = cf.d(DiffForm.basis_form(i, cf.basis))
            for j in range(self.size):
                r = r + wedge(self.theta[i][j], DiffForm.basis_form(j, cf.basis))
            out.append(r)
        return out

    def block(self, n: int, coframe: Coframe, restrict) -> "ConnectionMatrix":
        """Leading ``n x n`` block with each entry mapped by ``restrict``."""
        return ConnectionMatrix([[restrict(self.theta[i][j]) for j in range(n)] for i in range(n)], coframe)

    def map(self, fn) -> "ConnectionMatrix":
        return ConnectionMatrix([[fn(t) for t in row] for row in self.theta], self.coframe)

    def __eq__(self, other):
        return isinstance(other, ConnectionMatrix) and self.theta == other.theta

    def upper_entries(self) -> Dict[Tuple[int, int], DiffForm]:
        n = self.size
        return {(i, j): self.theta[i][j] for i, j in combinations(range(n), 2)}


def levi_civita(C: StructureConstants, coframe: Optional[Coframe] = None) -> ConnectionMatrix:
    """Unique torsion-free antisymmetric connection for the given structure constants.

    ``gamma_ijk = (C_ijk + C_jki - C_kij) / 2`` and ``theta^i_j = sum_k gamma_ijk w^k``.
    """
    if coframe is None:
        coframe = AmbientCoframe()
    n = C.size
    half = const(Fraction(1, 2))
    theta = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            coefs = [half * (C(i, j, k) + C(j, k, i) - C(k, i, j)) for k in range(n)]
            theta[i][j] = DiffForm.one_form(coefs, coframe.basis)
    conn = ConnectionMatrix(theta, coframe)
    bad = conn.antisymmetry_residual()
    if bad:
        raise InternalConsistencyError(f"connection not antisymmetric at {bad}")
    if any(not r.is_zero() for r in conn.torsion_residual()):
        raise InternalConsistencyError("first structure equation residual is nonzero")
    return conn


def connection(fctx: Optional[FContext] = None) -> ConnectionMatrix:
    cf = AmbientCoframe(fctx)
    return levi_civita(structure_constants(cf), cf)


@dataclass
class CurvatureTable:
    """Curvature 2-forms and their components ``R[(i, j, k, l)]`` with ``k < l`` (0-based)."""

    Omega: List[List[DiffForm]]
    R: Dict[Tuple[int, int, int, int], ScalarExpr] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.Omega)

    def component(self, i: int, j: int, k: int, l: int) -> ScalarExpr:
        """Any (k, l) order; antisymmetric extension."""
        if k == l:
            return ZERO
        if k < l:
            return self.R.get((i, j, k, l), ZERO)
        return -self.R.get((i, j, l, k), ZERO)

    def full(self) -> list:
        """Dense ``n^4`` nested list."""
        n = self.size
        return [[[[self.component(i, j, k, l) for l in range(n)] for k in range(n)]
                 for j in range(n)] for i in range(n)]

    def bianchi_residual(self) -> Dict[Tuple[int, int, int, int], ScalarExpr]:
        """Nonzero cyclic sums ``R^i_jkl + R^i_klj + R^i_ljk``."""
        n = self.size
        out = {}
        for i in range(n):
            for j, k, l in combinations(range(n), 3):
                s = self.component(i, j, k, l) + self.component(i, k, l, j) + self.component(i, l, j, k)
                if not s.is_zero():
                    out[(i, j, k, l)] = s
        return out

    def map(self, fn) -> "CurvatureTable":
        return CurvatureTable([[o.map(fn) for o in row] for row in self.Omega],
                              {k: fn(v) for k, v in self.R.items()})


def curvature(conn: ConnectionMatrix) -> CurvatureTable:
    """``Omega^i_j = d theta^i_j + sum_k theta^i_k ^ theta^k_j``; components read off increasing pairs."""
    cf = conn.coframe
    n = conn.size
    th = conn.theta
    Omega = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            w = cf.d(th[i][j])
            for k in range(n):
                if th[i][k].is_zero() or th[k][j].is_zero():
                    continue
                w = w + wedge(th[i][k], th[k][j])
            Omega[i][j] = w
    bad = [(i, j) for i in range(n) for j in range(i, n) if not (Omega[i][j] + Omega[j][i]).is_zero()]
    if bad:
        raise InternalConsistencyError(f"curvature not antisymmetric at {bad}")
    R = {}
    for i in range(n):
        for j in range(n):
            for (k, l), c in Omega[i][j].terms.items():
                R[(i, j, k, l)] = c
    return CurvatureTable(Omega, R)


@dataclass(frozen=True)
class MetricMatrix:
    """Coordinate metric in (x, y, p, q)."""

    g: Tuple[Tuple[ScalarExpr, ...], ...]

    def __getitem__(self, ij) -> ScalarExpr:
        i, j = ij
        return self.g[i][j]

    def is_symmetric(self) -> bool:
        n = len(self.g)
        return all(self.g[i][j] == self.g[j][i] for i in range(n) for j in range(n))

    def determinant(self) -> ScalarExpr:
        return det(self.g)


def det(m) -> ScalarExpr:
    """Laplace expansion; fine for the 3x3 and 4x4 sizes used here."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def coordinate_metric(fctx: Optional[FContext] = None) -> MetricMatrix:
    """``g = W^T W`` where the rows of W express each w^i in coordinate differentials."""
    W = AmbientCoframe(fctx).coordinate_matrix()
    n = len(W)
    g = []
    for a in range(n):
        row = []
        for b in range(n):
            v = ZERO
            for i in range(n):
                if not W[i][a].is_zero() and not W[i][b].is_zero():
                    v = v + W[i][a] * W[i][b]
            row.append(v)
        g.append(tuple(row))
    m = MetricMatrix(tuple(g))
    if not m.is_symmetric() or m.determinant() != ONE:
        raise InternalConsistencyError("coordinate metric must be symmetric with unit determinant")
    return m


def lower_antisymmetry_residual(table: CurvatureTable) -> List[Tuple[int, int, int, int]]:
    """Index sets where ``R_ijkl + R_jikl`` fails to vanish (orthonormal frame: lowering is trivial)."""
    n = table.size
    out = []
    for i, j in combinations(range(n), 2):
        for k, l in combinations(range(n), 2):
            if not (table.component(i, j, k, l) + table.component(j, i, k, l)).is_zero():
                out.append((i, j, k, l))
    return out
