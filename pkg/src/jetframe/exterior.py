"""Graded exterior algebra over a labelled coframe.

Forms are stored sparsely: a map from strictly increasing index tuples to
:class:`ScalarExpr` coefficients.  Indices are 0-based internally and rendered
1-based (``w1..w4`` for the ambient coframe, ``wt1..wt3`` for the adapted one).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Tuple

from .errors import BasisMismatchError, WrongSpaceError
from .expr import COORDS, ONE, ZERO, FunctionAtom, ScalarExpr, coord, fatom


@dataclass(frozen=True)
class CoframeBasis:
    name: str
    labels: Tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.labels)


AMBIENT4 = CoframeBasis("ambient", ("w1", "w2", "w3", "w4"))
ADAPTED3 = CoframeBasis("adapted", ("wt1", "wt2", "wt3"))


def _sort_with_sign(idx: Tuple[int, ...]):
    """Sort ``idx`` by bubble passes; return (sign, sorted) or (0, None) on repeats."""
    arr = list(idx)
    sign = 1
    n = len(arr)
    for i in range(n):
        for j in range(n - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
            elif arr[j] == arr[j + 1]:
                return 0, None
    return sign, tuple(arr)


class DiffForm:
    """An exterior form of fixed degree over a coframe basis."""

    __slots__ = ("basis", "degree", "terms")

    def __init__(self, basis: CoframeBasis, degree: int, terms: Optional[Mapping] = None):
        if degree < 0:
            raise ValueError("negative degree")
        self.basis = basis
        self.degree = degree
        clean: Dict[Tuple[int, ...], ScalarExpr] = {}
        if terms and degree <= basis.size:
            for idx, coef in terms.items():
                idx = tuple(idx)
                if len(idx) != degree:
                    raise ValueError(f"index {idx} does not match degree {degree}")
                if any(not 0 <= i < basis.size for i in idx):
                    raise ValueError(f"index {idx} out of range for {basis.name}")
                sign, key = _sort_with_sign(idx)
                if sign == 0:
                    continue
                coef = ScalarExpr.coerce(coef)
                if sign < 0:
                    coef = -coef
                if key in clean:
                    coef = clean[key] + coef
                clean[key] = coef
        self.terms = {k: v for k, v in sorted(clean.items()) if not v.is_zero()}

    # -- constructors -------------------------------------------------------------------

    @classmethod
    def zero(cls, basis: CoframeBasis, degree: int) -> "DiffForm":
        return cls(basis, degree)

    @classmethod
    def scalar(cls, h, basis: CoframeBasis = AMBIENT4) -> "DiffForm":
        return cls(basis, 0, {(): h})

    @classmethod
    def basis_form(cls, i: int, basis: CoframeBasis = AMBIENT4) -> "DiffForm":
        """The coframe member with 0-based index ``i``."""
        return cls(basis, 1, {(i,): ONE})

    @classmethod
    def one_form(cls, coefs: Iterable, basis: CoframeBasis = AMBIENT4) -> "DiffForm":
        return cls(basis, 1, {(i,): c for i, c in enumerate(coefs)})

    # -- access -------------------------------------------------------------------------

    def coefficient(self, *idx: int) -> ScalarExpr:
        """Coefficient of the wedge monomial ``idx`` (any order; sign absorbed)."""
        sign, key = _sort_with_sign(tuple(idx))
        if sign == 0:
            return ZERO
        c = self.terms.get(key, ZERO)
        return c if sign > 0 else -c

    def components(self) -> list:
        """Coefficients of a 1-form as a dense list."""
        if self.degree != 1:
            raise ValueError("components() is defined for 1-forms")
        return [self.coefficient(i) for i in range(self.basis.size)]

    def is_zero(self) -> bool:
        return not self.terms

    def map(self, fn) -> "DiffForm":
        return DiffForm(self.basis, self.degree, {k: fn(v) for k, v in self.terms.items()})

    # -- algebra ------------------------------------------------------------------------

    def _check(self, other: "DiffForm"):
        if self.basis != other.basis:
            raise BasisMismatchError(f"{self.basis.name} vs {other.basis.name}")

    def __add__(self, other: "DiffForm") -> "DiffForm":
        if not isinstance(other, DiffForm):
            return NotImplemented
        self._check(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return DiffForm(self.basis, self.degree, terms)

    def __neg__(self) -> "DiffForm":
        return self.map(lambda v: -v)

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def scale(self, h) -> "DiffForm":
        h = ScalarExpr.coerce(h)
        if h.is_zero():
            return DiffForm.zero(self.basis, self.degree)
        return self.map(lambda v: h * v)

    def __mul__(self, h) -> "DiffForm":
        if isinstance(h, DiffForm):
            return NotImplemented
        return self.scale(h)

    __rmul__ = __mul__

    def wedge(self, other: "DiffForm") -> "DiffForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self.basis == other.basis and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.basis, self.degree, tuple(self.terms.items())))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, coef in self.terms.items():
            mono = "^".join(self.basis.labels[i] for i in idx)
            text = coef.render()
            if not idx:
                parts.append(text)
            elif text == "1":
                parts.append(mono)
            elif text == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({text})*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffForm<{self.basis.name},{self.degree}>({self.render()})"


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    """Exterior product; graded-anticommutative and bilinear."""
    if a.basis != b.basis:
        raise BasisMismatchError(f"{a.basis.name} vs {b.basis.name}")
    terms: Dict[Tuple[int, ...], ScalarExpr] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            sign, key = _sort_with_sign(ia + ib)
            if sign == 0:
                continue
            v = ca * cb
            if sign < 0:
                v = -v
            terms[key] = terms[key] + v if key in terms else v
    return DiffForm(a.basis, a.degree + b.degree, terms)


class Coframe:
    """Exterior derivative on forms over ``basis``.

    Subclasses supply ``d_scalar`` and the derivatives of the basis 1-forms;
    ``d`` then follows from the graded Leibniz rule.
    """

    basis: CoframeBasis

    def d_scalar(self, h) -> DiffForm:
        raise NotImplementedError

    def d_basis(self, i: int) -> DiffForm:
        raise NotImplementedError

    def d(self, a: DiffForm) -> DiffForm:
        if a.basis != self.basis:
            raise BasisMismatchError(f"{a.basis.name} vs {self.basis.name}")
        out = DiffForm.zero(self.basis, a.degree + 1)
        for idx, coef in a.terms.items():
            mono = DiffForm(self.basis, len(idx), {idx: ONE})
            out = out + wedge(self.d_scalar(coef), mono)
            for m, i in enumerate(idx):
                left = DiffForm(self.basis, m, {idx[:m]: ONE})
                right = DiffForm(self.basis, len(idx) - m - 1, {idx[m + 1:]: ONE})
                piece = wedge(wedge(left, self.d_basis(i)), right)
                out = out + piece.scale(coef if m % 2 == 0 else -coef)
        return out


class FContext:
    """The right-hand side ``f(x, y, p, q)``: either opaque or a concrete expression."""

    def __init__(self, f: Optional[ScalarExpr] = None):
        if f is not None:
            f = ScalarExpr.coerce(f)
            bad = [a for a in f.atoms() if not isinstance(a, str)]
            if bad or f.has_radical:
                raise WrongSpaceError("a concrete f may only use the coordinates x, y, p, q")
        self._f = f

    @classmethod
    def generic(cls) -> "FContext":
        return cls(None)

    @property
    def is_generic(self) -> bool:
        return self._f is None

    @property
    def f(self) -> ScalarExpr:
        return fatom() if self._f is None else self._f

    def fpartial(self, *derivs: str) -> ScalarExpr:
        if self._f is None:
            return fatom(*derivs)
        e = self._f
        for c in derivs:
            e = e.partial(c)
        return e

    def specialize(self, e: ScalarExpr) -> ScalarExpr:
        """Replace f-atoms in a generic result by partials of the concrete f."""
        if self._f is None:
            return e
        table = {a: self.fpartial(*a.derivs) for a in e.function_atoms("F")}
        return e.subs(table)

    def describe(self) -> str:
        return "generic" if self._f is None else self._f.render()


class AmbientCoframe(Coframe):
    """The contact coframe ``w1 = dx, w2 = dy - p dx, w3 = dp - q dx, w4 = dq - f dx``.

    Its dual frame is ``e1 = d_x + p d_y + q d_p + f d_q``, ``e2 = d_y``,
    ``e3 = d_p``, ``e4 = d_q``.  The derivatives of the basis forms are built
    once, from ``d(dxi - v dx) = w1 ^ dv`` with ``v = p, q, f``, and then
    looked up.
    """

    basis = AMBIENT4

    def __init__(self, fctx: Optional[FContext] = None):
        self.fctx = fctx if fctx is not None else FContext.generic()
        w1 = DiffForm.basis_form(0)
        velocity = [None, coord("p"), coord("q"), self.fctx.f]
        self._d_table = [DiffForm.zero(AMBIENT4, 2)]
        for v in velocity[1:]:
            self._d_table.append(wedge(w1, self.d_scalar(v)))

    def e1(self, h: ScalarExpr) -> ScalarExpr:
        return (h.partial("x") + coord("p") * h.partial("y")
                + coord("q") * h.partial("p") + self.fctx.f * h.partial("q"))

    def d_scalar(self, h) -> DiffForm:
        h = ScalarExpr.coerce(h)
        if h.has_radical or any(isinstance(a, FunctionAtom) and a.head != "F" for a in h.atoms()):
            raise WrongSpaceError("section atoms present; pull back to the submanifold first")
        return DiffForm.one_form([self.e1(h), h.partial("y"), h.partial("p"), h.partial("q")])

    def d_basis(self, i: int) -> DiffForm:
        return self._d_table[i]

    def coordinate_matrix(self) -> list:
        """Rows express each w^i in (dx, dy, dp, dq)."""
        f = self.fctx.f
        return [
            [ONE, ZERO, ZERO, ZERO],
            [-coord("p"), ONE, ZERO, ZERO],
            [-coord("q"), ZERO, ONE, ZERO],
            [-f, ZERO, ZERO, ONE],
        ]

    def frame_matrix(self) -> list:
        """Columns are e_1..e_4 in the coordinate basis (d_x, d_y, d_p, d_q)."""
        f = self.fctx.f
        return [
            [ONE, ZERO, ZERO, ZERO],
            [coord("p"), ONE, ZERO, ZERO],
            [coord("q"), ZERO, ONE, ZERO],
            [f, ZERO, ZERO, ONE],
        ]


_GENERIC = None


def _ambient(fctx: Optional[FContext]) -> AmbientCoframe:
    global _GENERIC
    if fctx is None or fctx.is_generic:
        if _GENERIC is None:
            _GENERIC = AmbientCoframe()
        return _GENERIC
    return AmbientCoframe(fctx)


def d_scalar(h, fctx: Optional[FContext] = None) -> DiffForm:
    """``dh = (e1 h) w1 + h_y w2 + h_p w3 + h_q w4``."""
    return _ambient(fctx).d_scalar(h)


def d_form(a: DiffForm, fctx: Optional[FContext] = None) -> DiffForm:
    return _ambient(fctx).d(a)


__all__ = [
    "ADAPTED3",
    "AMBIENT4",
    "AmbientCoframe",
    "Coframe",
    "CoframeBasis",
    "DiffForm",
    "FContext",
    "d_form",
    "d_scalar",
    "wedge",
    "COORDS",
]
