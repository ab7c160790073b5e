"""Command-line entry point.

Exit status: 0 on success, 1 when a requested verification fails, 2 for bad
input (syntax errors, unknown identifiers, a generic f passed to ``verify``),
3 for an incompatible section and 4 for an internal-consistency failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import IncompatibleSectionError, InternalConsistencyError, JetFrameError, ParseError
from .report import BUILDERS, Options, build, render

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_INCOMPATIBLE, EXIT_INTERNAL = 0, 1, 2, 3, 4

_HELP = {
    "frame": "coframe, dual frame and the d w table",
    "connection": "Levi-Civita connection forms theta[i][j]",
    "curvature": "curvature forms and the R[i][j][k][l] table",
    "surface": "induced geometry of the section q = Q(x, y, p)",
    "classify": "minimal / totally geodesic flags of a section",
    "verify": "numeric oracle sweep for a concrete f",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jetframe", description="Moving-frame geometry of y''' = f(x, y, p, q).")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in BUILDERS:
        sp = sub.add_parser(name, help=_HELP[name])
        sp.add_argument("--f", default="generic", help="right-hand side f(x, y, p, q) or 'generic'")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        if name in ("surface", "classify", "verify"):
            sp.add_argument("--q", default="generic" if name != "verify" else None,
                            help="section Q(x, y, p), 'generic' or 'degenerate'")
        if name == "surface":
            sp.add_argument("--gauss", action="store_true", help="also tabulate the Gauss-equation residual")
        if name == "verify":
            sp.add_argument("--points", type=int, default=10)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--h-fd", type=float, default=1e-4)
            sp.add_argument("--tol", type=float, default=None)
            sp.add_argument("--oracle", choices=("fd", "analytic"), default="fd")
    return ap


def options(ns: argparse.Namespace) -> Options:
    return Options(f=ns.f, q=getattr(ns, "q", None), points=getattr(ns, "points", 10),
                   seed=getattr(ns, "seed", 0), h_fd=getattr(ns, "h_fd", 1e-4),
                   tol=getattr(ns, "tol", None), oracle=getattr(ns, "oracle", "fd"),
                   gauss=getattr(ns, "gauss", False))


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        doc = build(ns.command, options(ns))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IncompatibleSectionError as exc:
        print("error: incompatible section", file=sys.stderr)
        for v in exc.violations:
            print(f"  violation: {v}", file=sys.stderr)
        return EXIT_INCOMPATIBLE
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (JetFrameError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(render(doc, ns.format))
    if not doc.ok:
        for msg in doc.failures:
            print(f"FAIL {msg}", file=sys.stderr)
        return EXIT_VERIFY if ns.command == "verify" else EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
