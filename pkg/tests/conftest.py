from itertools import combinations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jetframe.exterior import AMBIENT4, DiffForm
from jetframe.expr import FunctionAtom, ScalarExpr, coord, fatom

settings.register_profile("jetframe", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("jetframe")

X, Y, P, Q = (coord(c) for c in "xypq")

small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def polynomials(draw, coords="xypq", max_terms=3, max_deg=2, with_f=False):
    """Small integer polynomials, optionally with a few f-atoms as extra variables."""
    gens = [coord(c) for c in coords]
    if with_f:
        gens += [fatom(), fatom("y"), fatom("p"), fatom("q")]
    out = ScalarExpr.const(draw(small_ints))
    for _ in range(draw(st.integers(0, max_terms))):
        term = ScalarExpr.const(draw(small_ints))
        for _ in range(draw(st.integers(0, max_deg))):
            term = term * draw(st.sampled_from(gens))
        out = out + term
    return out


LEAVES = st.one_of(
    st.integers(-4, 4),
    st.sampled_from(["x", "y", "p", "q", "s"]),
    st.sampled_from([FunctionAtom("F", ("y",)), FunctionAtom("F", ("p", "q"))]),
)


def _tree(children):
    return st.one_of(
        st.tuples(st.just("+"), children, children),
        st.tuples(st.just("*"), children, children),
        st.tuples(st.just("-"), children),
        # denominators of the form 2 + b^2 never vanish at real points
        st.tuples(st.just("/"), children, st.tuples(st.just("+"), st.just(2), st.tuples(st.just("^"), children, st.just(2)))),
    )


trees = st.recursive(LEAVES, _tree, max_leaves=6)


@st.composite
def one_forms(draw, basis=AMBIENT4, with_f=True):
    coefs = [draw(polynomials(with_f=with_f, max_terms=2)) for _ in range(basis.size)]
    return DiffForm.one_form(coefs, basis)


@st.composite
def forms(draw, degree=None, with_f=True):
    """Random sparse forms over the ambient coframe."""
    deg = draw(st.integers(0, 4)) if degree is None else degree
    monos = list(combinations(range(4), deg))
    chosen = draw(st.lists(st.sampled_from(monos), min_size=1, max_size=min(3, len(monos)), unique=True))
    terms = {m: draw(polynomials(with_f=with_f, max_terms=2)) for m in chosen}
    return DiffForm(AMBIENT4, deg, terms)


def binding_values():
    return st.tuples(*[st.floats(-1.0, 1.0, allow_nan=False) for _ in range(4)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
