"""Moving-frame geometry of third-order ODEs y''' = f(x, y, p, q)."""

from .expr import (
    COORDS,
    FunctionAtom,
    NumericBinding,
    ScalarExpr,
    alpha,
    beta,
    const,
    coord,
    evaluate,
    fatom,
    partial,
    qatom,
    radical,
    s,
    simplify,
)

from .exterior import ADAPTED3, AMBIENT4, AmbientCoframe, DiffForm, FContext, d_form, d_scalar, wedge
from .frames import connection, coordinate_metric, curvature, levi_civita, structure_constants
from .parser import parse
from .surface import Section, SectionCalculus, check_compatibility, classify

__version__ = "0.1.0"
