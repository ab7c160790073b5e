"""Exact scalar algebra over jet coordinates and opaque function atoms.

Every :class:`ScalarExpr` is stored in canonical form as ``c + d*s`` where
``c`` and ``d`` are reduced multivariate rational functions with rational
coefficients and ``s`` is the square root of a fixed radicand (by default
``1 + Q_y**2``).  Because ``s**2`` is folded back into the radicand on every
multiplication, two expressions are symbolically equal exactly when their
canonical parts coincide; ``==`` implements that test.

Multivariate gcd and polynomial normalisation are delegated to sympy; atom
bookkeeping, differentiation rules and numeric evaluation live here.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

import sympy

from .errors import (
    InvalidDirectionError,
    MalformedExpressionError,
    MissingBindingError,
    RadicandMismatchError,
    SingularPointError,
)

COORDS = ("x", "y", "p", "q")
_COORD_RANK = {c: i for i, c in enumerate(COORDS)}

# argument sets of the opaque function heads
HEAD_ARGS = {
    "F": frozenset("xypq"),
    "Q": frozenset("xyp"),
    "Alpha": frozenset("x"),
    "Beta": frozenset("x"),
}
_HEAD_RANK = {"F": 0, "Q": 1, "Alpha": 2, "Beta": 3}
_HEAD_NAME = {"F": "f", "Q": "Q", "Alpha": "alpha", "Beta": "beta"}


@dataclass(frozen=True)
class FunctionAtom:
    """A partial derivative of one of the opaque functions.

    The multi-index is stored sorted, so ``FunctionAtom("F", ("p", "y"))``
    and ``FunctionAtom("F", ("y", "p"))`` are the same atom ``f_yp``.
    """

    head: str
    derivs: tuple = ()

    def __post_init__(self):
        if self.head not in HEAD_ARGS:
            raise ValueError(f"unknown function head {self.head!r}")
        allowed = HEAD_ARGS[self.head]
        for c in self.derivs:
            if c not in allowed:
                raise InvalidDirectionError(f"{_HEAD_NAME[self.head]} does not depend on {c}")
        object.__setattr__(self, "derivs", tuple(sorted(self.derivs, key=_COORD_RANK.__getitem__)))

    @property
    def order(self) -> int:
        return len(self.derivs)

    @property
    def name(self) -> str:
        base = _HEAD_NAME[self.head]
        return base + "_" + "".join(self.derivs) if self.derivs else base

    def differentiate(self, c: str) -> "FunctionAtom":
        if c not in HEAD_ARGS[self.head]:
            raise InvalidDirectionError(f"cannot differentiate {self.name} by {c}")
        return FunctionAtom(self.head, self.derivs + (c,))

    def __str__(self):
        return self.name


Atom = Union[str, FunctionAtom]


def atom_sort_key(atom: Atom):
    if isinstance(atom, str):
        return (0, _COORD_RANK[atom], 0, ())
    return (1, _HEAD_RANK[atom.head], atom.order, tuple(_COORD_RANK[c] for c in atom.derivs))


_SYMBOLS: dict = {}
_ATOMS: dict = {}


def _symbol(atom: Atom) -> sympy.Symbol:
    sym = _SYMBOLS.get(atom)
    if sym is None:
        name = atom if isinstance(atom, str) else atom.name
        sym = sympy.Symbol(name)
        _SYMBOLS[atom] = sym
        _ATOMS[sym] = atom
    return sym


for _c in COORDS:
    _symbol(_c)


def _atom_of(sym: sympy.Symbol) -> Atom:
    return _ATOMS[sym]


def _gens(*exprs) -> list:
    syms = set()
    for e in exprs:
        syms |= e.free_symbols
    return sorted(syms, key=lambda s: atom_sort_key(_ATOMS[s]))


_ONE = sympy.Integer(1)
_ZERO = sympy.Integer(0)


class _Frac:
    """Reduced rational function ``num/den`` with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=_ONE):
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den=_ONE) -> "_Frac":
        num = sympy.sympify(num)
        den = sympy.sympify(den)
        if den == 0:
            raise MalformedExpressionError("division by the zero polynomial")
        if num == 0:
            return _FZERO
        if den.is_Number:
            return cls(sympy.expand(num / den))
        c, p, q = sympy.cancel((num, den))
        if q.is_Number:
            return cls(sympy.expand(c * p / q))
        lc = sympy.Poly(q, *_gens(q)).LC()
        return cls(sympy.expand(c * p / lc), sympy.expand(q / lc))

    @property
    def is_poly(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: "_Frac") -> "_Frac":
        if self.num == 0:
            return other
        if other.num == 0:
            return self
        if self.den == 1 and other.den == 1:
            return _Frac(self.num + other.num)
        if self.den == other.den:
            return _Frac.make(self.num + other.num, self.den)
        return _Frac.make(sympy.expand(self.num * other.den + other.num * self.den),
                          sympy.expand(self.den * other.den))

    def __neg__(self) -> "_Frac":
        return _Frac(sympy.expand(-self.num), self.den)

    def __sub__(self, other: "_Frac") -> "_Frac":
        return self + (-other)

    def __mul__(self, other: "_Frac") -> "_Frac":
        if self.num == 0 or other.num == 0:
            return _FZERO
        if self.den == 1 and other.den == 1:
            return _Frac(sympy.expand(self.num * other.num))
        return _Frac.make(self.num * other.num, self.den * other.den)

    def inverse(self) -> "_Frac":
        if self.num == 0:
            raise MalformedExpressionError("division by the zero polynomial")
        return _Frac.make(self.den, self.num)

    def diff(self, sym) -> "_Frac":
        if self.den == 1:
            return _Frac(sympy.expand(sympy.diff(self.num, sym)))
        dn = sympy.diff(self.num, sym)
        dd = sympy.diff(self.den, sym)
        return _Frac.make(sympy.expand(dn * self.den - self.num * dd), sympy.expand(self.den ** 2))

    def xreplace(self, mapping) -> "_Frac":
        num = self.num.xreplace(mapping)
        den = self.den.xreplace(mapping)
        n, d = sympy.fraction(sympy.together(num / den))
        return _Frac.make(sympy.expand(n), sympy.expand(d))

    @property
    def free_symbols(self):
        return self.num.free_symbols | self.den.free_symbols

    def key(self):
        return (self.num, self.den)

    def __eq__(self, other):
        return isinstance(other, _Frac) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))


_FZERO = _Frac(_ZERO)
_FONE = _Frac(_ONE)


def _frac_of_number(v) -> _Frac:
    if isinstance(v, Fraction):
        return _Frac(sympy.Rational(v.numerator, v.denominator))
    return _Frac(sympy.Rational(v))


Number = Union[int, Fraction]


class ScalarExpr:
    """Canonical exact scalar ``c + d*s``.

    Instances are immutable.  Arithmetic with ints and Fractions coerces them.
    """

    __slots__ = ("_c", "_d", "_r", "_compiled")

    def __init__(self, c: _Frac = _FZERO, d: _Frac = _FZERO, r: Optional[_Frac] = None):
        self._c = c
        self._d = d
        self._r = None if d.is_zero() else (r if r is not None else _DEFAULT_RADICAND)
        self._compiled = None

    # -- coercion and structure ---------------------------------------------------------

    @staticmethod
    def coerce(v) -> "ScalarExpr":
        if isinstance(v, ScalarExpr):
            return v
        if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
            return ScalarExpr(_frac_of_number(v))
        raise TypeError(f"cannot coerce {type(v).__name__} to ScalarExpr")

    @property
    def has_radical(self) -> bool:
        return not self._d.is_zero()

    @property
    def rational_part(self) -> "ScalarExpr":
        return ScalarExpr(self._c)

    @property
    def radical_part(self) -> "ScalarExpr":
        """Coefficient of ``s`` (itself radical-free)."""
        return ScalarExpr(self._d)

    @property
    def radicand(self) -> Optional["ScalarExpr"]:
        return None if self._r is None else ScalarExpr(self._r)

    def is_zero(self) -> bool:
        return self._c.is_zero() and self._d.is_zero()

    def is_constant(self) -> bool:
        return (not self.has_radical) and self._c.is_poly and self._c.num.is_Number

    def constant_value(self) -> Optional[Fraction]:
        if not self.is_constant():
            return None
        r = sympy.Rational(self._c.num)
        return Fraction(int(r.p), int(r.q))

    def atoms(self) -> frozenset:
        syms = self._c.free_symbols | self._d.free_symbols
        if self._r is not None:
            syms |= self._r.free_symbols
        return frozenset(_ATOMS[s] for s in syms)

    def function_atoms(self, head: Optional[str] = None) -> frozenset:
        return frozenset(a for a in self.atoms()
                         if isinstance(a, FunctionAtom) and (head is None or a.head == head))

    def _radicand_with(self, other: "ScalarExpr") -> Optional[_Frac]:
        if self._r is None:
            return other._r
        if other._r is None or other._r == self._r:
            return self._r
        raise RadicandMismatchError("expressions carry different radicals")

    # -- arithmetic ---------------------------------------------------------------------

    def __add__(self, other) -> "ScalarExpr":
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._radicand_with(other)
        return ScalarExpr(self._c + other._c, self._d + other._d, r)

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr(-self._c, -self._d, self._r)

    def __pos__(self):
        return self

    def __sub__(self, other) -> "ScalarExpr":
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ScalarExpr":
        return ScalarExpr.coerce(other) - self

    def __mul__(self, other) -> "ScalarExpr":
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        r = self._radicand_with(other)
        a, b, c, d = self._c, self._d, other._c, other._d
        if b.is_zero() and d.is_zero():
            return ScalarExpr(a * c)
        rat = a * c
        if not b.is_zero() and not d.is_zero():
            rat = rat + b * d * r
        return ScalarExpr(rat, a * d + b * c, r)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarExpr":
        if not self.has_radical:
            return ScalarExpr(self._c.inverse())
        # (c + d s)^-1 = (c - d s) / (c^2 - d^2 R)
        norm = self._c * self._c - self._d * self._d * self._r
        if norm.is_zero():
            raise MalformedExpressionError("non-invertible radical expression")
        inv = norm.inverse()
        return ScalarExpr(self._c * inv, -(self._d * inv), self._r)

    def __truediv__(self, other) -> "ScalarExpr":
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ScalarExpr":
        return ScalarExpr.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "ScalarExpr":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        base = self
        if n < 0:
            base, n = self.inverse(), -n
        result = ONE
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarExpr):
            try:
                other = ScalarExpr.coerce(other)
            except TypeError:
                return NotImplemented
        return self._c == other._c and self._d == other._d and self._r == other._r

    def __hash__(self):
        return hash((self._c.key(), self._d.key(), None if self._r is None else self._r.key()))

    # -- calculus -----------------------------------------------------------------------

    def diff_atom(self, atom: Atom) -> "ScalarExpr":
        """Formal derivative treating ``atom`` as an independent variable and ``s`` as fixed."""
        sym = _symbol(atom)
        return ScalarExpr(self._c.diff(sym), self._d.diff(sym), self._r)

    def chain_derivative(self, rule: Callable[[Atom], Optional["ScalarExpr"]]) -> "ScalarExpr":
        """Total derivative given the derivative of every atom.

        ``rule(atom)`` returns the derivative of that atom (``None`` for zero).
        The radical contributes ``d * (R'/(2R)) * s``.
        """
        total = ZERO
        for sym in sorted(self._c.free_symbols | self._d.free_symbols, key=lambda s: atom_sort_key(_ATOMS[s])):
            da = rule(_ATOMS[sym])
            if da is None or da.is_zero():
                continue
            total = total + ScalarExpr(self._c.diff(sym), self._d.diff(sym), self._r) * da
        if self.has_radical:
            dr = ScalarExpr(self._r).chain_derivative(rule)
            if not dr.is_zero():
                # d(s) = R'/(2s) = R' s / (2R)
                ds = dr * ScalarExpr(_FZERO, self._r.inverse() * _frac_of_number(Fraction(1, 2)), self._r)
                total = total + ScalarExpr(self._d) * ds
        return total

    def partial(self, c: str, strict: bool = True) -> "ScalarExpr":
        """Partial derivative along a jet coordinate.

        With ``strict`` (the default) differentiating a function atom along a
        coordinate outside its argument set raises :class:`InvalidDirectionError`;
        otherwise such derivatives are taken to vanish.
        """
        if c not in _COORD_RANK:
            raise ValueError(f"unknown coordinate {c!r}")

        def rule(atom):
            if isinstance(atom, str):
                return ONE if atom == c else None
            if c not in HEAD_ARGS[atom.head]:
                if strict:
                    raise InvalidDirectionError(f"cannot differentiate {atom.name} by {c}")
                return None
            return ScalarExpr.atom(atom.differentiate(c))

        return self.chain_derivative(rule)

    def subs(self, mapping: Mapping[Atom, object]) -> "ScalarExpr":
        """Replace atoms by radical-free expressions (also inside the radicand)."""
        if not mapping:
            return self
        table = {}
        for atom, value in mapping.items():
            value = ScalarExpr.coerce(value)
            if value.has_radical:
                raise MalformedExpressionError("substituted values must be radical-free")
            table[_symbol(atom)] = value._c.num / value._c.den
        present = self._c.free_symbols | self._d.free_symbols
        if self._r is not None:
            present |= self._r.free_symbols
        if not present & table.keys():
            return self
        c = self._c.xreplace(table)
        d = self._d.xreplace(table)
        if d.is_zero():
            return ScalarExpr(c)
        r = self._r.xreplace(table)
        if r == self._r:
            return ScalarExpr(c, d, r)
        return ScalarExpr(c) + ScalarExpr(d) * radical(ScalarExpr(r))

    # -- numerics -----------------------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            r = self._r if self._r is not None else _FONE
            parts = [self._c.num, self._c.den, self._d.num, self._d.den, r.num, r.den]
            syms = _gens(*parts)
            fn = sympy.lambdify(syms, parts, modules="math")
            self._compiled = ([_ATOMS[s] for s in syms], fn)
        return self._compiled

    def evaluate(self, binding: "NumericBinding") -> float:
        """Numeric value under ``binding``; raises SingularPointError at poles."""
        atoms, fn = self._compile()
        vals = [binding.atom_value(a) for a in atoms]
        try:
            cn, cd, dn, dd, rn, rd = (float(v) for v in fn(*vals))
        except (ZeroDivisionError, OverflowError) as exc:
            raise SingularPointError(str(exc)) from exc
        if abs(cd) < 1e-14 or (self.has_radical and (abs(dd) < 1e-14 or abs(rd) < 1e-14)):
            raise SingularPointError("denominator vanishes at the bound point")
        value = cn / cd
        if self.has_radical:
            rad = rn / rd
            if rad < 0:
                raise SingularPointError("negative radicand")
            value += dn / dd * math.sqrt(rad)
        if not math.isfinite(value):
            raise SingularPointError("non-finite value")
        return value

    # -- rendering ----------------------------------------------------------------------

    def render(self) -> str:
        rat = _render_frac(self._c)
        if not self.has_radical:
            return rat
        rad_sym = "s" if self._r == _DEFAULT_RADICAND else "sqrt(" + _render_frac(self._r) + ")"
        rad_coef = _render_frac(self._d)
        if rad_coef == "1":
            rad_term = rad_sym
        elif rad_coef == "-1":
            rad_term = "-" + rad_sym
        elif _is_simple_product(rad_coef):
            rad_term = rad_coef + "*" + rad_sym
        else:
            rad_term = "(" + rad_coef + ")*" + rad_sym
        if rat == "0":
            return rad_term
        if rad_term.startswith("-"):
            return rat + " - " + rad_term[1:]
        return rat + " + " + rad_term

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ScalarExpr({self.render()!r})"

    def to_sympy(self) -> sympy.Expr:
        """Plain sympy expression; the radical appears as ``sqrt(radicand)``."""
        out = self._c.num / self._c.den
        if self.has_radical:
            out = out + self._d.num / self._d.den * sympy.sqrt(self._r.num / self._r.den)
        return out

    # -- constructors -------------------------------------------------------------------

    @staticmethod
    def const(v: Number) -> "ScalarExpr":
        return ScalarExpr(_frac_of_number(v))

    @staticmethod
    def coord(c: str) -> "ScalarExpr":
        if c not in _COORD_RANK:
            raise ValueError(f"unknown coordinate {c!r}")
        return ScalarExpr(_Frac(_symbol(c)))

    @staticmethod
    def atom(a: Atom) -> "ScalarExpr":
        return ScalarExpr(_Frac(_symbol(a)))


def _is_simple_product(text: str) -> bool:
    return not any(ch in text for ch in " /")


def _render_atom(atom: Atom) -> str:
    if isinstance(atom, str):
        return atom
    if atom.head in ("Alpha", "Beta"):
        return atom.name + "(x)"
    return atom.name


def _render_poly(expr) -> str:
    if expr.is_Number:
        r = sympy.Rational(expr)
        return str(r.p) if r.q == 1 else f"{r.p}/{r.q}"
    gens = _gens(expr)
    poly = sympy.Poly(expr, *gens)
    pieces = []
    for monom, coef in poly.terms():
        coef = sympy.Rational(coef)
        factors = []
        for g, e in zip(gens, monom):
            if e == 0:
                continue
            name = _render_atom(_ATOMS[g])
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(coef)
        mag_text = str(mag.p) if mag.q == 1 else f"{mag.p}/{mag.q}"
        if not factors:
            body = mag_text
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = mag_text + "*" + "*".join(factors)
        pieces.append(("-" if coef < 0 else "+", body))
    sign, body = pieces[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _render_frac(fr: _Frac) -> str:
    num = _render_poly(fr.num)
    if fr.den == 1:
        return num
    den = _render_poly(fr.den)
    if not _is_simple_product(num) or num.startswith("-"):
        num = "(" + num + ")"
    return num + "/(" + den + ")"


ZERO = ScalarExpr()
ONE = ScalarExpr(_FONE)


def const(v: Number) -> ScalarExpr:
    return ScalarExpr.const(v)


def coord(c: str) -> ScalarExpr:
    return ScalarExpr.coord(c)


def fatom(*derivs: str) -> ScalarExpr:
    """The opaque right-hand side ``f`` or one of its partials, e.g. ``fatom("y", "p")``."""
    return ScalarExpr.atom(FunctionAtom("F", tuple(derivs)))


def qatom(*derivs: str) -> ScalarExpr:
    """The opaque section function ``Q(x, y, p)`` or one of its partials."""
    return ScalarExpr.atom(FunctionAtom("Q", tuple(derivs)))


def alpha(order: int = 0) -> ScalarExpr:
    return ScalarExpr.atom(FunctionAtom("Alpha", ("x",) * order))


def beta(order: int = 0) -> ScalarExpr:
    return ScalarExpr.atom(FunctionAtom("Beta", ("x",) * order))


_DEFAULT_RADICAND = _Frac(sympy.expand(1 + _symbol(FunctionAtom("Q", ("y",))) ** 2))


def radical(radicand: Optional[ScalarExpr] = None) -> ScalarExpr:
    """Square root of ``radicand`` (default ``1 + Q_y**2``) as an algebraic atom."""
    if radicand is None:
        return ScalarExpr(_FZERO, _FONE, _DEFAULT_RADICAND)
    radicand = ScalarExpr.coerce(radicand)
    if radicand.has_radical:
        raise MalformedExpressionError("nested radicals are not supported")
    value = radicand.constant_value()
    if value is not None:
        if value < 0:
            raise MalformedExpressionError("negative constant radicand")
        rn, rd = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if rn * rn == value.numerator and rd * rd == value.denominator:
            return const(Fraction(rn, rd))
    else:
        _, factors = sympy.factor_list(radicand._c.num)
        _, dfactors = sympy.factor_list(radicand._c.den)
        if all(e % 2 == 0 for _, e in factors + dfactors):
            raise MalformedExpressionError("radicand is a perfect square")
    return ScalarExpr(_FZERO, _FONE, radicand._c)


def s() -> ScalarExpr:
    """The default radical ``s = (1 + Q_y**2)**(1/2)``."""
    return radical()


def simplify(e) -> ScalarExpr:
    """Canonical form of ``e``.

    ``e`` may already be a :class:`ScalarExpr` (returned unchanged, since those
    are canonical on construction) or a raw tree of nested tuples
    ``("+", a, b)``, ``("*", a, b)``, ``("^", a, n)``, ``("-", a)`` whose leaves
    are numbers, coordinate names, :class:`FunctionAtom` instances, ``"s"`` or
    ScalarExprs.
    """
    if isinstance(e, ScalarExpr):
        return e
    if isinstance(e, (int, Fraction)) and not isinstance(e, bool):
        return const(e)
    if isinstance(e, FunctionAtom):
        return ScalarExpr.atom(e)
    if isinstance(e, str):
        return s() if e == "s" else coord(e)
    if isinstance(e, tuple) and e:
        op, *args = e
        if op == "+":
            out = ZERO
            for a in args:
                out = out + simplify(a)
            return out
        if op == "*":
            out = ONE
            for a in args:
                out = out * simplify(a)
            return out
        if op == "-" and len(args) == 1:
            return -simplify(args[0])
        if op == "-" and len(args) == 2:
            return simplify(args[0]) - simplify(args[1])
        if op == "/" and len(args) == 2:
            return simplify(args[0]) / simplify(args[1])
        if op == "^" and len(args) == 2:
            return simplify(args[0]) ** int(args[1])
    raise MalformedExpressionError(f"not an expression tree: {e!r}")


def partial(e: ScalarExpr, c: str, strict: bool = True) -> ScalarExpr:
    return ScalarExpr.coerce(e).partial(c, strict=strict)


def evaluate(e: ScalarExpr, binding: "NumericBinding") -> float:
    return ScalarExpr.coerce(e).evaluate(binding)


# -- numeric binding ----------------------------------------------------------------------

FunctionSource = Union[Callable[..., float], ScalarExpr, None]

_EPS = 2.220446049250313e-16


def _fd_step(order: int, h: float) -> float:
    # keep round-off of the order-k quotient below truncation error
    return max(h, _EPS ** (1.0 / (order + 2)))


def _central(fn: Callable[..., float], point: tuple, directions: tuple, h: float) -> float:
    if not directions:
        return fn(*point)
    k = directions[-1]
    rest = directions[:-1]
    up = list(point)
    dn = list(point)
    up[k] += h
    dn[k] -= h
    return (_central(fn, tuple(up), rest, h) - _central(fn, tuple(dn), rest, h)) / (2.0 * h)


@dataclass
class NumericBinding:
    """A point ``(x, y, p, q)`` plus implementations of the opaque functions.

    Each function slot takes either a Python callable (partials then come from
    central finite differences with step ``h_fd``) or a :class:`ScalarExpr`
    (partials are taken symbolically, which is exact up to float rounding).
    ``section`` implements ``q(x, y, p)``.
    """

    x: float = 0.0
    y: float = 0.0
    p: float = 0.0
    q: float = 0.0
    f: FunctionSource = None
    section: FunctionSource = None
    alpha: FunctionSource = None
    beta: FunctionSource = None
    h_fd: float = 1e-4
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not (1e-7 <= self.h_fd <= 1e-3):
            raise ValueError(f"h_fd must lie in [1e-7, 1e-3], got {self.h_fd}")

    def at(self, **coords: float) -> "NumericBinding":
        """Same functions at a moved point (the derivative cache is shared)."""
        new = dataclasses.replace(self, **coords)
        new._cache = self._cache
        return new

    def coords(self) -> tuple:
        return (self.x, self.y, self.p, self.q)

    def atom_value(self, atom: Atom) -> float:
        if isinstance(atom, str):
            return float(getattr(self, atom))
        source, args = {
            "F": (self.f, COORDS),
            "Q": (self.section, ("x", "y", "p")),
            "Alpha": (self.alpha, ("x",)),
            "Beta": (self.beta, ("x",)),
        }[atom.head]
        if source is None:
            raise MissingBindingError(f"no implementation bound for {atom.name}")
        if isinstance(source, ScalarExpr):
            key = (atom.head, atom.derivs)
            expr = self._cache.get(key)
            if expr is None:
                expr = source
                for c in atom.derivs:
                    expr = expr.partial(c, strict=False)
                self._cache[key] = expr
            point = {a: getattr(self, a) for a in args}
            return expr.evaluate(self.at(**point))
        point = tuple(float(getattr(self, a)) for a in args)
        dirs = tuple(args.index(c) for c in atom.derivs)
        return float(_central(source, point, dirs, _fd_step(len(dirs), self.h_fd)))


def callable_of(e: ScalarExpr, args: Iterable[str] = COORDS, **functions) -> Callable[..., float]:
    """Turn an expression into a plain float function of the given coordinates."""
    args = tuple(args)

    def fn(*vals):
        b = NumericBinding(**dict(zip(args, vals)), **functions)
        return e.evaluate(b)

    return fn
