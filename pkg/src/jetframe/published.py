"""Reference values for the generic-f connection and curvature as printed in the literature.

These are claims to be checked, never inputs to the engine.  Indices are
1-based, matching the conventional display ``R^i_{jkl}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .expr import ONE, ScalarExpr, coord, fatom
from .exterior import DiffForm

half = ScalarExpr.const(Fraction(1, 2))
quarter = ScalarExpr.const(Fraction(1, 4))
p, q = coord("p"), coord("q")
f = fatom()
fy, fp, fq = fatom("y"), fatom("p"), fatom("q")


def _F(*d: str) -> ScalarExpr:
    return fatom(*d)


def published_connection() -> Dict[Tuple[int, int], DiffForm]:
    """``theta^i_j`` for i < j as coefficient lists over w1..w4."""
    z = ScalarExpr.const(0)
    rows = {
        (1, 2): [z, z, -half, -half * fy],
        (1, 3): [z, -half, z, -half * (ONE + fp)],
        (1, 4): [z, -half * fy, -half * (ONE + fp), -fq],
        (2, 3): [-half, z, z, z],
        (2, 4): [half * fy, z, z, z],
        (3, 4): [-half * (ONE - fp), z, z, z],
    }
    return {k: DiffForm.one_form(v) for k, v in rows.items()}


def published_curvature() -> Dict[Tuple[int, int, int, int], ScalarExpr]:
    """The thirty displayed independent components ``R^i_{jkl}``."""
    three_half = ScalarExpr.const(Fraction(3, 2))
    c214 = half + 2 * fy * fq - fp * half + p * _F("y", "y") + _F("x", "y") + f * _F("y", "q") + q * _F("y", "p")
    c412 = 2 * fy * fq + half * (ONE - fp) + p * _F("y", "y") + _F("x", "y") + f * _F("y", "q") + q * _F("y", "p")
    c314 = 2 * fp * fq + p * _F("y", "p") + f * _F("p", "q") + half * fy + _F("x", "p")
    c413 = 2 * fp * fq + p * _F("y", "p") + f * _F("p", "q") + q * _F("p", "p") + half * fy + _F("x", "p")
    c414 = (three_half - half * fp ** 2 - half * fy ** 2 + 2 * fq ** 2 + fp + 2 * q * _F("p", "q")
            + 2 * f * _F("q", "q") + 2 * p * _F("y", "q") + 2 * _F("x", "q"))
    return {
        (1, 2, 1, 2): quarter * (ONE - 3 * fy ** 2),
        (1, 2, 1, 3): -quarter * fy * (ONE + 3 * fp),
        (1, 2, 1, 4): -half * c214,
        (1, 2, 2, 4): -half * _F("y", "y"),
        (1, 2, 3, 4): -half * _F("y", "p"),
        (1, 3, 1, 2): -quarter * fy * (ONE + 3 * fp),
        (1, 3, 1, 3): -half * (ONE + fp + three_half * fp ** 2),
        (1, 3, 1, 4): -half * c314,
        (1, 3, 2, 4): -half * _F("y", "p"),
        (1, 3, 3, 4): -half * _F("p", "p"),
        (1, 4, 1, 2): -half * c412,
        (1, 4, 1, 3): half * c413,
        (1, 4, 1, 4): -half * c414,
        (1, 4, 2, 4): -half * _F("y", "q"),
        (1, 4, 3, 4): -half * _F("p", "q"),
        (2, 3, 2, 3): quarter,
        (2, 3, 2, 4): quarter * fy,
        (2, 3, 3, 4): -quarter * (ONE + fp),
        (2, 4, 1, 2): -half * _F("y", "y"),
        (2, 4, 1, 3): -half * _F("y", "p"),
        (2, 4, 1, 4): -half * _F("y", "q"),
        (2, 4, 2, 3): quarter * fy,
        (2, 4, 2, 4): quarter * fy ** 2,
        (2, 4, 3, 4): -quarter * (fq - half * fy - half * fy * fq),
        (3, 4, 1, 2): -half * _F("y", "p"),
        (3, 4, 1, 3): -half * _F("p", "p"),
        (3, 4, 1, 4): -half * _F("p", "q"),
        (3, 4, 2, 3): -quarter * (ONE + fp),
        (3, 4, 2, 4): quarter * (fy * (ONE + fp) - 2 * fq),
        (3, 4, 3, 4): quarter * (ONE + fp) ** 2,
    }


@dataclass
class EntryComparison:
    """One published entry against the engine's value."""

    key: Tuple[int, ...]
    published: ScalarExpr
    engine: ScalarExpr
    oracle: Optional[dict] = None

    @property
    def matches(self) -> bool:
        return self.published == self.engine

    @property
    def difference(self) -> ScalarExpr:
        return self.published - self.engine

    def label(self) -> str:
        i, j, k, l = self.key
        return f"R^{i}_{j}{k}{l}"

    def as_dict(self) -> dict:
        out = {
            "entry": self.label(),
            "matches": self.matches,
            "published": self.published.render(),
            "engine": self.engine.render(),
        }
        if not self.matches:
            out["difference"] = self.difference.render()
        if self.oracle is not None:
            out["oracle"] = self.oracle
        return out


def compare_connection(conn) -> List[Tuple[Tuple[int, int], bool]]:
    """Match each published ``theta^i_j`` (i<j) against a generic-f ConnectionMatrix."""
    pub = published_connection()
    return [((i, j), conn.theta[i - 1][j - 1] == form) for (i, j), form in sorted(pub.items())]


def compare_curvature(table) -> List[EntryComparison]:
    """Match each published component against a generic-f CurvatureTable."""
    out = []
    for key, val in sorted(published_curvature().items()):
        i, j, k, l = key
        out.append(EntryComparison(key, val, table.component(i - 1, j - 1, k - 1, l - 1)))
    return out


# -- submanifold claims ------------------------------------------------------------------
#
# Written in terms of q_y, q_yy, (q_x + p q_y)_y, (q_x + p q_y)_p and s = sqrt(1 + q_y^2),
# exactly as printed (outward normal opposite to the engine's default).

def published_second_fundamental(qy: ScalarExpr, qyy: ScalarExpr, phi_y: ScalarExpr,
                                 s: ScalarExpr) -> List[List[ScalarExpr]]:
    """Printed ``h_ij`` for a section with ``q_y`` not identically zero."""
    z = ScalarExpr.const(0)
    h12 = (ONE - qy ** 2) / (ONE + qy ** 2) * phi_y
    h13 = -ONE / (2 * s)
    h22 = -qyy / s ** 3
    return [[z, h12, h13], [h12, h22, z], [h13, z, z]]


def published_II_13(qy: ScalarExpr, phi_p: ScalarExpr, s: ScalarExpr) -> ScalarExpr:
    """Printed coefficient of ``wt1 (x) wt3`` in the second fundamental form."""
    return -(qy - phi_p) / s


def published_mean_curvature(qyy: ScalarExpr, s: ScalarExpr) -> ScalarExpr:
    return -qyy / (3 * s ** 3)


def published_gauss_kronecker(qyy: ScalarExpr, s: ScalarExpr) -> ScalarExpr:
    return qyy / (4 * s ** 5)


def published_induced_g11(p_: ScalarExpr, qy: ScalarExpr, Q: ScalarExpr) -> ScalarExpr:
    """Printed ``dx^2`` coefficient of the induced metric, ``1 + p^2 (1 + q_y)^2 + q^2``."""
    return ONE + p_ ** 2 * (ONE + qy) ** 2 + Q ** 2


def published_degenerate_h(phi_y: ScalarExpr) -> List[List[ScalarExpr]]:
    """Printed ``h_ij`` when ``q_y`` vanishes identically."""
    z = ScalarExpr.const(0)
    return [[z, half * phi_y, half], [half * phi_y, z, z], [half, z, z]]
