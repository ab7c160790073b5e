"""Report documents for the command-line front end.

Every builder returns plain JSON-ready data.  Forms are lists of
``[indices, coefficient]`` pairs with 1-based indices in increasing order, and
table entries are keyed ``theta[i][j]`` and ``R[i][j][k][l]`` so the text
rendering reads like the usual index notation.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .errata import curvature_errata, surface_errata
from .exterior import AmbientCoframe, DiffForm, FContext
from .expr import NumericBinding, fatom
from .frames import (connection, coordinate_metric, curvature, lower_antisymmetry_residual,
                     structure_constants)
from .oracle import (antisymmetry_residual_numeric, bianchi_residual_numeric, compare_value,
                     frame_compare, gauss_residual_numeric, richardson_ratios, riemann_numeric,
                     sample_points, second_fundamental_numeric)
from .parser import parse
from .published import compare_connection, compare_curvature
from .surface import Section, SectionCalculus, classify

DEFAULT_TOL = {"fd": 1e-5, "analytic": 1e-9}
# numeric h and the numeric Gauss check use FD frame derivatives along the section
SURFACE_TOL = 1e-7
GAUSS_TOL = 1e-8


@dataclass
class Options:
    f: str = "generic"
    q: Optional[str] = None
    points: int = 10
    seed: int = 0
    h_fd: float = 1e-4
    tol: Optional[float] = None
    oracle: str = "fd"
    gauss: bool = False

    @property
    def tolerance(self) -> float:
        return self.tol if self.tol is not None else DEFAULT_TOL[self.oracle]


@dataclass
class Document:
    data: Dict[str, object]
    ok: bool = True
    failures: List[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, allow_nan=True) + "\n"

    def to_text(self) -> str:
        lines: List[str] = []
        _text(self.data, 0, lines)
        return "\n".join(lines) + "\n"


# -- rendering helpers -------------------------------------------------------------------

def form_pairs(a: DiffForm) -> list:
    return [[[i + 1 for i in idx], c.render()] for idx, c in sorted(a.terms.items())]


_FORM_KEY = re.compile(r"(d w\d|theta\[|Omega\[)")


def _is_form(v) -> bool:
    return isinstance(v, list) and all(
        isinstance(t, list) and len(t) == 2 and isinstance(t[0], list) and isinstance(t[1], str) for t in v)


def _form_text(pairs: list, labels: str = "w") -> str:
    if not pairs:
        return "0"
    parts = []
    for idx, c in pairs:
        mono = "^".join(f"{labels}{i}" for i in idx)
        if not idx:
            parts.append(c)
        elif c == "1":
            parts.append(mono)
        elif c == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"({c})*{mono}")
    return " + ".join(parts)


def _scalar_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _text(v, depth: int, lines: List[str], key: Optional[str] = None) -> None:
    pad = "  " * depth
    head = f"{pad}{key}" if key is not None else pad
    if _is_form(v) and (v or (key is not None and _FORM_KEY.match(key))):
        lines.append(f"{head} = {_form_text(v)}")
    elif isinstance(v, dict):
        if key is not None:
            lines.append(f"{head}:")
            depth += 1
        for k, sub in v.items():
            _text(sub, depth, lines, str(k))
    elif isinstance(v, list) and v and all(isinstance(t, dict) for t in v):
        lines.append(f"{head}:")
        for t in v:
            lines.append(pad + "  - " + ", ".join(f"{k}={_scalar_text(x)}" for k, x in t.items()
                                                 if not isinstance(x, (dict, list))))
    elif isinstance(v, list) and v and all(isinstance(t, list) for t in v):
        lines.append(f"{head}:")
        for row in v:
            lines.append(pad + "  [" + ", ".join(_scalar_text(t) for t in row) + "]")
    elif isinstance(v, list):
        lines.append(f"{head} = [" + ", ".join(_scalar_text(t) for t in v) + "]")
    else:
        lines.append(f"{head} = {_scalar_text(v)}")


def theta_key(i: int, j: int) -> str:
    return f"theta[{i + 1}][{j + 1}]"


def r_key(key) -> str:
    return "R" + "".join(f"[{i + 1}]" for i in key)


def matrix_text(m) -> List[List[str]]:
    return [[v.render() for v in row] for row in m]


# -- inputs ------------------------------------------------------------------------------

def fcontext(text: str) -> FContext:
    if text.strip() == "generic":
        return FContext.generic()
    return FContext(parse(text))


def section_of(text: str) -> Section:
    t = text.strip()
    if t == "generic":
        return Section.generic()
    if t == "degenerate":
        return Section.degenerate()
    return Section.from_expr(parse(t))


def meta(command: str, opts: Options) -> dict:
    out = {"command": command, "version": __version__, "f": opts.f}
    if opts.q is not None:
        out["q"] = opts.q
    if command == "verify":
        out.update({"points": opts.points, "seed": opts.seed, "h_fd": opts.h_fd,
                    "oracle": opts.oracle, "tolerance": opts.tolerance})
    return out


# -- builders ----------------------------------------------------------------------------

def frame_report(opts: Options) -> Document:
    fctx = fcontext(opts.f)
    cf = AmbientCoframe(fctx)
    labels = ("dx", "dy", "dp", "dq")
    vecs = ("d_x", "d_y", "d_p", "d_q")
    W, E = cf.coordinate_matrix(), cf.frame_matrix()
    coframe = {f"w{i + 1}": " + ".join(f"({c.render()})*{labels[a]}" for a, c in enumerate(row) if not c.is_zero())
               for i, row in enumerate(W)}
    frame = {f"e{j + 1}": " + ".join(f"({E[a][j].render()})*{vecs[a]}" for a in range(4) if not E[a][j].is_zero())
             for j in range(4)}
    d_table = {f"d w{i + 1}": form_pairs(cf.d_basis(i)) for i in range(4)}
    C = structure_constants(cf)
    data = {"meta": meta("frame", opts), "connection": {
        "coframe": coframe, "frame": frame, "d_table": d_table,
        "structure_constants": {f"C[{i + 1}][{j + 1}][{k + 1}]": v.render()
                                for (i, j, k), v in sorted(C.nonzero().items())},
    }}
    return Document(data)


def _connection_section(conn, fctx: FContext) -> dict:
    out = {"theta": {theta_key(i, j): form_pairs(a) for (i, j), a in sorted(conn.upper_entries().items())},
           "antisymmetry_residual": [list(map(lambda t: t + 1, ij)) for ij in conn.antisymmetry_residual()],
           "torsion_residual_zero": all(r.is_zero() for r in conn.torsion_residual())}
    if fctx.is_generic:
        out["published"] = [{"entry": theta_key(i - 1, j - 1), "matches": ok} for (i, j), ok in compare_connection(conn)]
    return out


def connection_report(opts: Options) -> Document:
    fctx = fcontext(opts.f)
    conn = connection(fctx)
    sec = _connection_section(conn, fctx)
    ok = not sec["antisymmetry_residual"] and sec["torsion_residual_zero"]
    return Document({"meta": meta("connection", opts), "connection": sec}, ok=ok)


def curvature_report(opts: Options) -> Document:
    fctx = fcontext(opts.f)
    conn = connection(fctx)
    table = curvature(conn)
    n = table.size
    R = {r_key(k): table.component(*k).render()
         for k in sorted(table.R) if k[0] < k[1] and not table.R[k].is_zero()}
    sec = {
        "Omega": {f"Omega[{i + 1}][{j + 1}]": form_pairs(table.Omega[i][j]) for i in range(n) for j in range(i + 1, n)},
        "R": R,
        "bianchi_residual": {r_key(k): v.render() for k, v in sorted(table.bianchi_residual().items())},
        "lower_antisymmetry_residual": [r_key(k) for k in lower_antisymmetry_residual(table)],
    }
    if fctx.is_generic:
        sec["published"] = [c.as_dict() for c in compare_curvature(table)]
        sec["errata"] = curvature_errata()
    ok = not sec["bianchi_residual"] and not sec["lower_antisymmetry_residual"]
    return Document({"meta": meta("curvature", opts), "curvature": sec}, ok=ok)


def _surface_section(opts: Options, full: bool) -> dict:
    section = section_of(opts.q or "generic")
    fctx = fcontext(opts.f)
    rep = classify(section, fctx, gauss=full and opts.gauss)
    flags = {"section": rep.section, "f": rep.f, "branch": rep.branch,
             "minimal": rep.minimal, "totally_geodesic": rep.totally_geodesic,
             "H": rep.H.render(), "H2": rep.H2.render(), "Ke": rep.Ke.render()}
    if not full:
        return flags
    calc = SectionCalculus(section, fctx)
    out = dict(flags)
    out.update({
        "assumptions": rep.assumptions,
        "f_on_section": calc.pull(fatom(), strict=False).render(),
        "induced_metric": matrix_text(rep.metric),
        "rotation": matrix_text(rep.rotation.A),
        "normal": [v.render() for v in rep.normal],
        "theta": {theta_key(i, j): form_pairs(a) for (i, j), a in sorted(rep.theta.upper_entries().items())},
        "h": matrix_text(rep.h),
        "published_comparison": rep.published_comparison,
        "errata": surface_errata(),
    })
    if rep.gauss is not None:
        out["gauss_residual"] = {r_key(k): v.render() for k, v in sorted(rep.gauss.items()) if not v.is_zero()}
        out["gauss_zero"] = rep.gauss_zero
    return out


def surface_report(opts: Options) -> Document:
    sec = _surface_section(opts, full=True)
    ok = sec.get("gauss_zero", True) is not False
    return Document({"meta": meta("surface", opts), "surface": sec}, ok=ok)


def classify_report(opts: Options) -> Document:
    return Document({"meta": meta("classify", opts), "surface": _surface_section(opts, full=False)})


def verify_report(opts: Options) -> Document:
    """Oracle sweep: every frame component against the coordinate computation."""
    fctx = fcontext(opts.f)
    if fctx.is_generic:
        raise ValueError("verify needs a concrete f")
    table = curvature(connection(fctx))
    g = coordinate_metric(fctx)
    tol = opts.tolerance
    pts = sample_points(NumericBinding(h_fd=opts.h_fd), opts.points, seed=opts.seed,
                        accept=lambda pt: riemann_numeric(g, pt, mode="analytic"))
    samples = []
    failures = []
    worst = 0.0
    bianchi = 0.0
    antisym = 0.0
    for n, pt in enumerate(pts):
        Rc = riemann_numeric(g, pt, mode=opts.oracle)
        reports = frame_compare(table, Rc, fctx, pt, tol)
        bianchi = max(bianchi, bianchi_residual_numeric(Rc))
        antisym = max(antisym, antisymmetry_residual_numeric(Rc))
        bad = [r.as_dict() for r in reports if not r.passed]
        worst = max([worst] + [r.abs_error for r in reports])
        samples.append({"point": list(pt.coords), "compared": len(reports),
                        "max_abs_error": max(r.abs_error for r in reports), "failures": bad})
        failures += [f"point {n}: {d['quantity']}" for d in bad]
    entries, ratios = richardson_ratios(g, pts[0])
    sec = {"tolerance": tol, "samples": samples, "max_abs_error": worst,
           "bianchi_residual": bianchi, "antisymmetry_residual": antisym,
           "richardson": {"entries": [list(e) for e in entries], "ratios": ratios}}
    if not entries:
        sec["richardson"]["note"] = "central differences are exact for this metric; no truncation error to scale"
    bianchi_tol = max(tol, 1e-5)
    if bianchi > bianchi_tol:
        failures.append("numeric first Bianchi residual")
    if antisym > bianchi_tol:
        failures.append("numeric antisymmetry residual")
    if opts.q is not None:
        sec["surface"] = _verify_surface(opts, fctx, failures)
    sec["all_pass"] = not failures
    return Document({"meta": meta("verify", opts), "verify": sec}, ok=not failures, failures=failures)


def _verify_surface(opts: Options, fctx: FContext, failures: List[str]) -> dict:
    """Second fundamental form and Gauss equation against the numeric oracle."""
    section = section_of(opts.q)
    if section.opaque:
        raise ValueError("verify needs a concrete section")
    rep = classify(section, fctx)
    rng = np.random.default_rng(opts.seed)
    rows = []
    for n in range(opts.points):
        z = [float(v) for v in rng.uniform(-1.0, 1.0, size=3)]
        b = NumericBinding(x=z[0], y=z[1], p=z[2])
        oh = second_fundamental_numeric(section.Q, fctx.f, z)
        reports = [compare_value(f"h{i + 1}{j + 1}", rep.h[i][j].evaluate(b), oh[i, j], SURFACE_TOL)
                   for i in range(3) for j in range(i, 3)]
        gres = gauss_residual_numeric(section.Q, fctx.f, z)
        rows.append({"point": z, "max_abs_error_h": max(r.abs_error for r in reports), "gauss_residual": gres})
        failures += [f"surface point {n}: {r.quantity}" for r in reports if not r.passed]
        if gres > GAUSS_TOL:
            failures.append(f"surface point {n}: gauss residual")
    return {"h_tolerance": SURFACE_TOL, "gauss_tolerance": GAUSS_TOL, "samples": rows}


BUILDERS = {
    "frame": frame_report,
    "connection": connection_report,
    "curvature": curvature_report,
    "surface": surface_report,
    "classify": classify_report,
    "verify": verify_report,
}


def build(command: str, opts: Options) -> Document:
    return BUILDERS[command](opts)


def render(doc: Document, fmt: str = "text") -> str:
    return doc.to_json() if fmt == "json" else doc.to_text()
