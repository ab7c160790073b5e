"""Geometry of the hypersurface cut out by a section ``q = Q(x, y, p)``.

Everything here lives on the section.  Scalars are expressions in x, y, p,
the section and its partials, the radical ``s = sqrt(1 + Q_y^2)`` and, for an
opaque right-hand side, the pulled-back f-partials that the section does not
determine.  Such a leftover atom ``f_I`` stands for the composite ``f_I o sigma``.

Pullback of an opaque f uses only the chain rule applied to the identity
``f o sigma = Q_x + p Q_y + Q Q_p`` (and, off the degenerate branch, to
``f_q o sigma = 0``).  The q-free partials then follow by peeling one tangential
derivative at a time; partials carrying enough q's to escape both identities
stay opaque.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (IncompatibleSectionError, InternalConsistencyError, UnresolvedAtomError,
                     WrongSpaceError)
from .exterior import ADAPTED3, AMBIENT4, Coframe, CoframeBasis, DiffForm, FContext, wedge
from .expr import ONE, ZERO, FunctionAtom, ScalarExpr, const, coord, fatom, radical
from .frames import ConnectionMatrix, CurvatureTable, connection, curvature, det
from . import published as pub

SECTION3 = CoframeBasis("section", ("w1", "w2", "w3"))
ZCOORDS = ("x", "y", "p")
half = const(Fraction(1, 2))


class Section:
    """The function ``Q(x, y, p)``.

    Either an opaque atom depending on a chosen subset of (x, y, p) or a
    concrete expression in x, y, p, alpha(x) and beta(x).
    """

    def __init__(self, Q: ScalarExpr, args: Tuple[str, ...] = ZCOORDS, opaque: bool = False):
        self.Q = Q
        self.args = tuple(args)
        self.opaque = opaque
        self._partials: Dict[Tuple[str, ...], ScalarExpr] = {(): Q}
        self._s: Optional[ScalarExpr] = None

    @classmethod
    def generic(cls, args: str = "xy") -> "Section":
        """Opaque ``Q``; partials along coordinates outside ``args`` vanish."""
        return cls(ScalarExpr.atom(FunctionAtom("Q", ())), tuple(args), opaque=True)

    @classmethod
    def degenerate(cls) -> "Section":
        """Opaque ``Q(x)``: the branch where ``Q_y`` vanishes identically."""
        return cls.generic("x")

    @classmethod
    def from_expr(cls, e) -> "Section":
        e = ScalarExpr.coerce(e)
        if e.has_radical:
            raise WrongSpaceError("a section must be radical-free")
        for a in e.atoms():
            if a == "q" or (isinstance(a, FunctionAtom) and a.head in ("F", "Q")):
                raise WrongSpaceError(f"a section may not depend on {a}")
        return cls(e)

    def describe(self) -> str:
        if self.opaque:
            return f"Q({', '.join(self.args)})"
        return self.Q.render()

    # -- calculus of functions on the section that do not involve f ------------------------

    def _atom_rule(self, c: str):
        def rule(atom):
            if isinstance(atom, str):
                if atom == "q":
                    raise WrongSpaceError("the coordinate q does not live on the section; pull back first")
                return ONE if atom == c else None
            if atom.head == "Q":
                if not self.opaque:
                    raise WrongSpaceError("Q atoms only belong to opaque sections")
                if c not in self.args:
                    return None
                return ScalarExpr.atom(atom.differentiate(c))
            if atom.head in ("Alpha", "Beta"):
                return ScalarExpr.atom(atom.differentiate("x")) if c == "x" else None
            return "F"
        return rule

    def D(self, e: ScalarExpr, c: str) -> ScalarExpr:
        """Derivative along ``c`` of an f-free function on the section."""
        base = self._atom_rule(c)

        def rule(atom):
            r = base(atom)
            if r == "F":
                raise WrongSpaceError("use SectionCalculus.D for expressions with f atoms")
            return r

        return ScalarExpr.coerce(e).chain_derivative(rule)

    def partial(self, *derivs: str) -> ScalarExpr:
        key = tuple(sorted(derivs, key=ZCOORDS.index))
        hit = self._partials.get(key)
        if hit is None:
            hit = self.D(self.partial(*key[:-1]), key[-1])
            self._partials[key] = hit
        return hit

    @property
    def Q_y(self) -> ScalarExpr:
        return self.partial("y")

    @property
    def Q_p(self) -> ScalarExpr:
        return self.partial("p")

    @property
    def Q_yy(self) -> ScalarExpr:
        return self.partial("y", "y")

    @property
    def is_degenerate(self) -> bool:
        """``Q_y`` vanishes as a canonical form."""
        return self.Q_y.is_zero()

    @property
    def s(self) -> ScalarExpr:
        """``sqrt(1 + Q_y^2)``; the default radical atom when Q is opaque."""
        if self._s is None:
            if self.opaque and "y" in self.args:
                self._s = radical()
            else:
                self._s = radical(ONE + self.Q_y ** 2)
        return self._s

    @property
    def prolongation(self) -> ScalarExpr:
        """``Q_x + p Q_y + Q Q_p``: the value f must take on the section."""
        return self.partial("x") + coord("p") * self.Q_y + self.Q * self.Q_p


class SectionCalculus:
    """Pullback and differentiation on the section for a given right-hand side."""

    def __init__(self, section: Section, fctx: Optional[FContext] = None):
        self.section = section
        self.fctx = fctx if fctx is not None else FContext.generic()
        self._cache: Dict[FunctionAtom, ScalarExpr] = {}
        # off the degenerate branch an opaque f is taken to satisfy f_q o sigma = 0
        self.imposes_fq = self.fctx.is_generic and not section.is_degenerate

    @property
    def assumptions(self) -> List[str]:
        if not self.fctx.is_generic:
            return []
        out = ["f o sigma = Q_x + p*Q_y + Q*Q_p"]
        if self.imposes_fq:
            out.append("f_q o sigma = 0")
        return out

    # -- pullback -----------------------------------------------------------------------

    def _resolve(self, atom: FunctionAtom) -> ScalarExpr:
        hit = self._cache.get(atom)
        if hit is not None:
            return hit
        nq = atom.derivs.count("q")
        tang = [c for c in atom.derivs if c != "q"]
        opaque = nq >= 2 or (nq == 1 and not self.imposes_fq)
        if opaque:
            val = ScalarExpr.atom(atom)
        elif not tang:
            val = self.section.prolongation if nq == 0 else ZERO
        else:
            # peel the tangential direction along which Q is constant when possible
            order = sorted(set(tang), key=lambda c: (not self.section.partial(c).is_zero(), ZCOORDS.index(c)))
            c = order[0]
            rest = list(atom.derivs)
            rest.remove(c)
            lower = FunctionAtom("F", tuple(rest))
            val = self.D(self._resolve(lower), c)
            Qc = self.section.partial(c)
            if not Qc.is_zero():
                val = val - self._resolve(FunctionAtom("F", tuple(rest) + ("q",))) * Qc
        self._cache[atom] = val
        return val

    def pull(self, e, strict: bool = True) -> ScalarExpr:
        """``sigma^* e`` for an ambient scalar ``e``."""
        e = ScalarExpr.coerce(e)
        if self.fctx.is_generic:
            table = {a: self._resolve(a) for a in e.function_atoms("F")}
        else:
            e = self.fctx.specialize(e)
            table = {}
        if "q" in e.atoms():
            table["q"] = self.section.Q
        out = e.subs(table)
        if strict:
            left = out.function_atoms("F")
            if left:
                raise UnresolvedAtomError(left)
        return out

    def D(self, e: ScalarExpr, c: str) -> ScalarExpr:
        """Derivative along ``c`` on the section, chain rule for leftover f atoms."""
        base = self.section._atom_rule(c)
        Qc = self.section.partial(c)

        def rule(atom):
            r = base(atom)
            if r != "F":
                return r
            out = self._resolve(atom.differentiate(c))
            if not Qc.is_zero():
                out = out + self._resolve(atom.differentiate("q")) * Qc
            return out

        return ScalarExpr.coerce(e).chain_derivative(rule)

    # -- pulled-back coframe ------------------------------------------------------------

    def ambient_rows(self) -> List[List[ScalarExpr]]:
        """``sigma^* w^i`` in (dx, dy, dp)."""
        sec = self.section
        p = coord("p")
        fs = self.pull(self.fctx.f, strict=False)
        return [
            [ONE, ZERO, ZERO],
            [-p, ONE, ZERO],
            [-sec.Q, ZERO, ONE],
            [sec.partial("x") - fs, sec.Q_y, sec.Q_p],
        ]

    def coframe(self, basis: CoframeBasis = ADAPTED3) -> "SectionCoframe":
        key = "_cf_" + basis.name
        cf = self.__dict__.get(key)
        if cf is None:
            p = coord("p")
            sec = self.section
            if basis == ADAPTED3:
                M = [[ONE, ZERO, ZERO], [-sec.s * p, sec.s, ZERO], [-sec.Q, ZERO, ONE]]
            elif basis == SECTION3:
                M = [[ONE, ZERO, ZERO], [-p, ONE, ZERO], [-sec.Q, ZERO, ONE]]
            else:
                raise ValueError(f"no section coframe for basis {basis.name}")
            cf = SectionCoframe(self, basis, M)
            self.__dict__[key] = cf
        return cf

    def pull_form(self, a: DiffForm, basis: CoframeBasis = ADAPTED3, strict: bool = False) -> DiffForm:
        """Pull an ambient form back and express it over a section coframe."""
        if a.basis != AMBIENT4:
            raise WrongSpaceError("pull_form expects an ambient form")
        cf = self.coframe(basis)
        images = [cf.from_coordinates(row) for row in self.ambient_rows()]
        out = DiffForm.zero(basis, a.degree)
        for idx, coef in a.terms.items():
            mono = DiffForm.scalar(ONE, basis)
            for i in idx:
                mono = wedge(mono, images[i])
            if mono.is_zero():
                continue
            out = out + mono.scale(self.pull(coef, strict=strict))
        return out


class SectionCoframe(Coframe):
    """A coframe ``eta^a = sum_b M[a][b] dz^b`` on the section, z = (x, y, p)."""

    def __init__(self, calc: SectionCalculus, basis: CoframeBasis, M: List[List[ScalarExpr]]):
        self.calc = calc
        self.basis = basis
        self.M = M
        d = det(M)
        if d.is_zero():
            raise InternalConsistencyError("degenerate section coframe")
        # inverse by cofactors: N[b][a] expresses dz^b in eta^a
        n = 3
        N = [[ZERO] * n for _ in range(n)]
        for a in range(n):
            for b in range(n):
                minor = [[M[r][c] for c in range(n) if c != a] for r in range(n) if r != b]
                cof = det(minor)
                N[a][b] = cof / d if (a + b) % 2 == 0 else -cof / d
        self.N = N
        self._d_table: Dict[int, DiffForm] = {}

    def from_coordinates(self, row: Sequence[ScalarExpr]) -> DiffForm:
        """The 1-form ``sum_b row[b] dz^b`` over this coframe."""
        coefs = []
        for a in range(3):
            v = ZERO
            for b in range(3):
                if not row[b].is_zero() and not self.N[b][a].is_zero():
                    v = v + row[b] * self.N[b][a]
            coefs.append(v)
        return DiffForm.one_form(coefs, self.basis)

    def d_scalar(self, h) -> DiffForm:
        h = ScalarExpr.coerce(h)
        return self.from_coordinates([self.calc.D(h, c) for c in ZCOORDS])

    def d_basis(self, i: int) -> DiffForm:
        hit = self._d_table.get(i)
        if hit is None:
            dz = [self.from_coordinates([ONE if b == c else ZERO for b in range(3)]) for c in range(3)]
            hit = DiffForm.zero(self.basis, 2)
            for b in range(3):
                if self.M[i][b].is_zero():
                    continue
                hit = hit + wedge(self.d_scalar(self.M[i][b]), dz[b])
            self._d_table[i] = hit
        return hit


# -- compatibility ---------------------------------------------------------------------

@dataclass
class Compatibility:
    ok: bool
    violations: List[Tuple[str, ScalarExpr]]
    residual: DiffForm
    assumptions: List[str] = field(default_factory=list)

    def messages(self) -> List[str]:
        return [f"{name} (got {val.render()})" for name, val in self.violations]


def check_compatibility(section: Section, fctx: Optional[FContext] = None) -> Compatibility:
    """Compare ``sigma^*(d w^4)`` with ``d(sigma^* w^4)`` on the section.

    The left side pulls back f-partials by differentiating ``sigma^* f`` along
    the section, which leaves the residual ``sigma^*(f_q) (Q_y w1^w2 + Q_p w1^w3)``.
    """
    calc = SectionCalculus(section, fctx)
    cf = calc.coframe(SECTION3)
    w = [DiffForm.basis_form(i, SECTION3) for i in range(3)]
    Qy, Qp = section.Q_y, section.Q_p
    pulled_w4 = w[1].scale(Qy) + w[2].scale(Qp)
    # sigma^* f_q is left opaque here so the residual shows what must vanish
    fq = FunctionAtom("F", ("q",))
    if calc.fctx.is_generic:
        fq_pulled = ScalarExpr.atom(fq)
        fs = section.prolongation
    else:
        fq_pulled = calc.pull(calc.fctx.fpartial("q"))
        fs = calc.pull(calc.fctx.f)
    lhs = (wedge(w[0], w[1]).scale(calc.D(fs, "y")) + wedge(w[0], w[2]).scale(calc.D(fs, "p"))
           + wedge(w[0], pulled_w4).scale(fq_pulled))
    rhs = cf.d(pulled_w4)
    residual = lhs - rhs
    violations: List[Tuple[str, ScalarExpr]] = []
    if not Qp.is_zero():
        violations.append(("Q_p != 0", Qp))
    mixed = residual.coefficient(0, 1)
    if calc.fctx.is_generic:
        pass  # f_q o sigma = 0 is imposed off the degenerate branch
    elif not mixed.is_zero():
        violations.append(("q_y*sigma^*(f_q) != 0", mixed))
    if not calc.fctx.is_generic:
        gap = fs - section.prolongation
        if not gap.is_zero():
            violations.append(("sigma^*(f) != Q_x + p*Q_y + Q*Q_p", gap))
    return Compatibility(not violations, violations, residual, calc.assumptions)


def _require(section: Section, fctx: Optional[FContext]) -> SectionCalculus:
    comp = check_compatibility(section, fctx)
    if not comp.ok:
        raise IncompatibleSectionError(comp.messages())
    return SectionCalculus(section, fctx)


def pullback_scalar(e, section: Section, fctx: Optional[FContext] = None, strict: bool = True) -> ScalarExpr:
    return SectionCalculus(section, fctx).pull(e, strict=strict)


# -- metric, cross product and adapted frame --------------------------------------------

def induced_metric(section: Section, fctx: Optional[FContext] = None) -> List[List[ScalarExpr]]:
    """Coordinate matrix of the induced metric in (x, y, p)."""
    calc = _require(section, fctx)
    rows = calc.ambient_rows()
    return [[sum((rows[i][a] * rows[i][b] for i in range(4)), ZERO) for b in range(3)] for a in range(3)]


def cross4(X: Sequence, Y: Sequence, Z: Sequence) -> List[ScalarExpr]:
    """``X x Y x Z`` defined by ``g(X x Y x Z, W) = vol(X, Y, Z, W)`` in an orthonormal frame."""
    X, Y, Z = ([ScalarExpr.coerce(v) for v in V] for V in (X, Y, Z))
    out = []
    for w in range(4):
        e = [ONE if k == w else ZERO for k in range(4)]
        out.append(det([X, Y, Z, e]))
    return out


@dataclass
class FrameRotation:
    A: List[List[ScalarExpr]]
    sin_eps: ScalarExpr
    cos_eps: ScalarExpr

    def transpose(self) -> List[List[ScalarExpr]]:
        return [list(r) for r in zip(*self.A)]

    def is_orthogonal(self) -> bool:
        At = self.transpose()
        return all(_dot(At[i], [self.A[k][j] for k in range(4)]) == (ONE if i == j else ZERO)
                   for i in range(4) for j in range(4))

    def determinant(self) -> ScalarExpr:
        return det(self.A)


def _dot(u, v) -> ScalarExpr:
    out = ZERO
    for a, b in zip(u, v):
        if not a.is_zero() and not b.is_zero():
            out = out + a * b
    return out


def tangent_frame(calc: SectionCalculus) -> List[List[ScalarExpr]]:
    """Coordinate tangents ``sigma_* d_x, d_y, d_p`` in the orthonormal frame e_1..e_4."""
    rows = calc.ambient_rows()
    return [[rows[i][k] for i in range(4)] for k in range(3)]


def adapted_frame(section: Section, fctx: Optional[FContext] = None) -> Tuple[FrameRotation, List[ScalarExpr]]:
    calc = _require(section, fctx)
    s = section.s
    sin_e = section.Q_y / s
    cos_e = ONE / s
    A = [
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, cos_e, ZERO, -sin_e],
        [ZERO, ZERO, ONE, ZERO],
        [ZERO, sin_e, ZERO, cos_e],
    ]
    rot = FrameRotation(A, sin_e, cos_e)
    if not rot.is_orthogonal() or rot.determinant() != ONE:
        raise InternalConsistencyError("frame rotation is not in SO(4)")
    N = cross4(*tangent_frame(calc))
    norm2 = _dot(N, N)
    if norm2 != s * s:
        raise InternalConsistencyError(f"normal length squared {norm2.render()} differs from s^2")
    n = [v / s for v in N]
    if n != [A[k][3] for k in range(4)]:
        raise InternalConsistencyError("cross-product normal disagrees with the rotation")
    return rot, n


def d_epsilon(calc: SectionCalculus) -> DiffForm:
    """``d(arctan Q_y) = dQ_y / (1 + Q_y^2)`` over the adapted coframe."""
    sec = calc.section
    return calc.coframe(ADAPTED3).d_scalar(sec.Q_y).scale(ONE / (ONE + sec.Q_y ** 2))


def gauge_transform(theta: ConnectionMatrix, rot: FrameRotation, calc: SectionCalculus,
                    strict: bool = False) -> ConnectionMatrix:
    """``A^T dA + A^T (sigma^* theta) A`` over the adapted coframe."""
    cf = calc.coframe(ADAPTED3)
    n = 4
    At = rot.transpose()
    th = [[calc.pull_form(theta.theta[i][j], strict=strict) for j in range(n)] for i in range(n)]
    dA = [[cf.d_scalar(rot.A[i][j]) for j in range(n)] for i in range(n)]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = DiffForm.zero(ADAPTED3, 1)
            for k in range(n):
                if At[i][k].is_zero():
                    continue
                acc = acc + dA[k][j].scale(At[i][k])
                for l in range(n):
                    if rot.A[l][j].is_zero() or th[k][l].is_zero():
                        continue
                    acc = acc + th[k][l].scale(At[i][k] * rot.A[l][j])
            out[i][j] = acc
    conn = ConnectionMatrix(out, cf)
    bad = conn.antisymmetry_residual()
    if bad:
        raise InternalConsistencyError(f"gauge-transformed connection not antisymmetric at {bad}")
    return conn


# -- second fundamental form and curvatures ----------------------------------------------

@dataclass
class SecondFundamental:
    h: List[List[ScalarExpr]]
    orientation: int = 1

    def __getitem__(self, ij) -> ScalarExpr:
        i, j = ij
        return self.h[i][j]

    def flipped(self) -> "SecondFundamental":
        return SecondFundamental([[-v for v in row] for row in self.h], -self.orientation)

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self.h for v in row)


def second_fundamental(theta_t: ConnectionMatrix, orientation: int = 1) -> SecondFundamental:
    """``theta~^4_i = sum_j h_ij wt^j``; ``orientation=-1`` uses ``-n``."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    h = [[theta_t.theta[3][i].coefficient(j) for j in range(3)] for i in range(3)]
    bad = [(i, j) for i in range(3) for j in range(i + 1, 3) if h[i][j] != h[j][i]]
    if bad:
        raise InternalConsistencyError(f"second fundamental form not symmetric at {bad}")
    sf = SecondFundamental(h, 1)
    return sf if orientation == 1 else sf.flipped()


def curvatures(sf: SecondFundamental) -> Tuple[ScalarExpr, ScalarExpr, ScalarExpr]:
    """``(H, H_2, K_e)`` from the elementary symmetric functions of ``h``."""
    h = sf.h
    S1 = h[0][0] + h[1][1] + h[2][2]
    S2 = ZERO
    for i in range(3):
        for j in range(i + 1, 3):
            S2 = S2 + h[i][i] * h[j][j] - h[i][j] * h[j][i]
    S3 = det(h)
    return S1 / 3, S2 / 3, S3


def ambient_in_adapted_frame(R: CurvatureTable, rot: FrameRotation, calc: SectionCalculus,
                             strict: bool = False) -> Dict[Tuple[int, int, int, int], ScalarExpr]:
    """Pull the ambient components back and rotate them into the adapted frame (tangent indices only)."""
    A = rot.A
    full = R.full()
    pulled = [[[[calc.pull(full[a][b][c][d], strict=strict) if not full[a][b][c][d].is_zero() else ZERO
                 for d in range(4)] for c in range(4)] for b in range(4)] for a in range(4)]
    out = {}
    # rotate one slot at a time; the tensor is orthonormal so raising is trivial
    T = pulled
    for slot in range(4):
        new = [[[[ZERO] * 4 for _ in range(4)] for _ in range(4)] for _ in range(4)]
        for idx in _indices4():
            acc = ZERO
            for m in range(4):
                src = list(idx)
                src[slot] = m
                a = A[m][idx[slot]]
                v = T[src[0]][src[1]][src[2]][src[3]]
                if a.is_zero() or v.is_zero():
                    continue
                acc = acc + a * v
            new[idx[0]][idx[1]][idx[2]][idx[3]] = acc
        T = new
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(k + 1, 3):
                    out[(i, j, k, l)] = T[i][j][k][l]
    return out


def _indices4():
    return [(a, b, c, d) for a in range(4) for b in range(4) for c in range(4) for d in range(4)]


def gauss_residual(R_adapted: Dict[Tuple[int, int, int, int], ScalarExpr], R_induced: CurvatureTable,
                   sf: SecondFundamental) -> Dict[Tuple[int, int, int, int], ScalarExpr]:
    """``R_ijrs - R~_ijrs - (h_is h_jr - h_ir h_js)`` for tangent indices, r < s."""
    h = sf.h
    out = {}
    for (i, j, r, s_), val in R_adapted.items():
        out[(i, j, r, s_)] = val - R_induced.component(i, j, r, s_) - (h[i][s_] * h[j][r] - h[i][r] * h[j][s_])
    return out


# -- report ----------------------------------------------------------------------------

@dataclass
class SurfaceReport:
    section: str
    f: str
    branch: str
    assumptions: List[str]
    compatibility: Compatibility
    metric: List[List[ScalarExpr]]
    rotation: FrameRotation
    normal: List[ScalarExpr]
    theta: ConnectionMatrix
    sf: SecondFundamental
    H: ScalarExpr
    H2: ScalarExpr
    Ke: ScalarExpr
    minimal: bool
    totally_geodesic: bool
    published_comparison: List[dict]
    gauss: Optional[Dict[Tuple[int, int, int, int], ScalarExpr]] = None

    @property
    def h(self) -> List[List[ScalarExpr]]:
        return self.sf.h

    @property
    def gauss_zero(self) -> Optional[bool]:
        if self.gauss is None:
            return None
        return all(v.is_zero() for v in self.gauss.values())


def _entry(display: str, published: ScalarExpr, engine: ScalarExpr, orientation_sensitive: bool = True,
           note: str = "") -> dict:
    if published == engine:
        status = "match"
    elif orientation_sensitive and published == -engine:
        status = "match-opposite-normal"
    else:
        status = "mismatch"
    out = {"display": display, "status": status, "published": published.render(), "engine": engine.render()}
    if status == "mismatch" and not engine.is_zero():
        ratio = published / engine
        out["ratio"] = ratio.render()
    if note:
        out["note"] = note
    return out


def published_comparison(section: Section, calc: SectionCalculus, metric, sf: SecondFundamental,
                         H: ScalarExpr, Ke: ScalarExpr, totally_geodesic: bool) -> List[dict]:
    """Symbolic comparison of the printed submanifold displays with this section's results."""
    p = coord("p")
    phi = section.partial("x") + p * section.Q_y
    phi_y = calc.D(phi, "y")
    phi_p = calc.D(phi, "p")
    s = section.s
    out = []
    g11 = pub.published_induced_g11(p, section.Q_y, section.Q)
    out.append(_entry("induced metric dx^2 coefficient", g11, metric[0][0], orientation_sensitive=False,
                      note="printed p^2(1+q_y)^2 versus direct expansion p^2(1+q_y^2)"))
    h = sf.h
    if section.is_degenerate:
        ph = pub.published_degenerate_h(calc.pull(fatom("y"), strict=False))
        for i, j in ((0, 1), (0, 2)):
            out.append(_entry(f"h{i + 1}{j + 1} (q_y = 0)", ph[i][j], h[i][j]))
        out.append(_entry("mean curvature (q_y = 0)", ZERO, H))
        out.append(_entry("Gauss-Kronecker curvature (q_y = 0)", ZERO, Ke))
        out.append({"display": "minimal but not totally geodesic (q_y = 0)",
                    "status": "match" if (H.is_zero() and not totally_geodesic) else "mismatch",
                    "published": "minimal, not totally geodesic",
                    "engine": f"minimal={H.is_zero()}, totally_geodesic={totally_geodesic}"})
        return out
    ph = pub.published_second_fundamental(section.Q_y, section.Q_yy, phi_y, s)
    for i in range(3):
        for j in range(i, 3):
            out.append(_entry(f"h{i + 1}{j + 1}", ph[i][j], h[i][j]))
    ii13 = pub.published_II_13(section.Q_y, phi_p, s)
    out.append(_entry("second fundamental form wt1 (x) wt3 coefficient", ii13, h[0][2],
                      note="printed coefficient versus the printed h13"))
    out.append(_entry("mean curvature", pub.published_mean_curvature(section.Q_yy, s), H))
    out.append(_entry("Gauss-Kronecker curvature", pub.published_gauss_kronecker(section.Q_yy, s), Ke))
    lin = _linear_in_y(section)
    if lin is not None:
        claim = "totally geodesic iff alpha = +-1"
        out.append({"display": "totally geodesic criterion for q = alpha(x) y + beta(x)",
                    "status": "mismatch" if not totally_geodesic else "match",
                    "published": claim,
                    "engine": f"totally_geodesic={totally_geodesic} (h13 = {h[0][2].render()})",
                    "note": "h13 never vanishes, so no choice of alpha makes h vanish"})
    return out


def _linear_in_y(section: Section) -> Optional[ScalarExpr]:
    if section.opaque:
        return None
    if section.Q_yy.is_zero() and section.Q_p.is_zero() and not section.Q_y.is_zero():
        return section.Q_y
    return None


def classify(section: Section, fctx: Optional[FContext] = None, orientation: int = 1,
             gauss: bool = False) -> SurfaceReport:
    """Full submanifold analysis of a compatible section."""
    fctx = fctx if fctx is not None else FContext.generic()
    comp = check_compatibility(section, fctx)
    if not comp.ok:
        raise IncompatibleSectionError(comp.messages())
    calc = SectionCalculus(section, fctx)
    metric = induced_metric(section, fctx)
    rot, n = adapted_frame(section, fctx)
    theta = connection(fctx)
    theta_t = gauge_transform(theta, rot, calc)
    sf = second_fundamental(theta_t, orientation)
    H, H2, Ke = curvatures(sf)
    minimal_pred = section.Q_yy.is_zero()
    if minimal_pred != H.is_zero():
        raise InternalConsistencyError("Q_yy = 0 and H = 0 disagree")
    tg = sf.is_zero()
    base_sf = sf if orientation == 1 else sf.flipped()
    bH, _, bKe = curvatures(base_sf)
    ledger = published_comparison(section, calc, metric, base_sf, bH, bKe, tg)
    report = SurfaceReport(
        section=section.describe(), f=fctx.describe(),
        branch="degenerate" if section.is_degenerate else "generic",
        assumptions=calc.assumptions, compatibility=comp, metric=metric, rotation=rot, normal=n,
        theta=theta_t, sf=sf, H=H, H2=H2, Ke=Ke, minimal=H.is_zero(), totally_geodesic=tg,
        published_comparison=ledger)
    if gauss:
        report.gauss = gauss_table(section, fctx, calc=calc, rot=rot, theta_t=theta_t, sf=base_sf)
    return report


def gauss_table(section: Section, fctx: Optional[FContext] = None, calc: Optional[SectionCalculus] = None,
                rot: Optional[FrameRotation] = None, theta_t: Optional[ConnectionMatrix] = None,
                sf: Optional[SecondFundamental] = None) -> Dict[Tuple[int, int, int, int], ScalarExpr]:
    """Gauss-equation residual table (leftover f atoms stay opaque)."""
    fctx = fctx if fctx is not None else FContext.generic()
    calc = calc or _require(section, fctx)
    if rot is None:
        rot, _ = adapted_frame(section, fctx)
    if theta_t is None:
        theta_t = gauge_transform(connection(fctx), rot, calc)
    if sf is None:
        sf = second_fundamental(theta_t)
    cf = calc.coframe(ADAPTED3)
    block = ConnectionMatrix([[theta_t.theta[i][j] for j in range(3)] for i in range(3)], cf)
    if any(not r.is_zero() for r in block.torsion_residual()):
        raise InternalConsistencyError("tangential block is not torsion-free")
    R_ind = curvature(block)
    R_amb = curvature(connection(fctx))
    R_hat = ambient_in_adapted_frame(R_amb, rot, calc)
    return gauss_residual(R_hat, R_ind, sf)
