import random

import pytest
from hypothesis import strategies as st

from rigidcheck.fields import GF, QQ
from rigidcheck.poly import SparsePoly, from_string
from rigidcheck.regularity import FamilyParams, LocalModel


def P(field, nvars, text):
    """Shorthand polynomial builder for tests."""
    return from_string(field, nvars, text)


def zero(field, nvars):
    return SparsePoly.zero(field, nvars)


def make_model(M, m, field=QQ, q=None, w=None, w0=None):
    """Hand-built local model; q and w map degree -> polynomial text/SparsePoly.

    q covers degrees 1..m, w degrees 0..2l (l = M + 1 - m); unspecified
    components are zero.  w0 may be given as a scalar.
    """
    params = FamilyParams(M=M, m=m, l=M + 1 - m)
    n = params.local_vars
    qs = [zero(field, n)] * m
    for d, val in (q or {}).items():
        qs[d - 1] = P(field, n, val) if isinstance(val, str) else val
    ws = [zero(field, n)] * (2 * params.l + 1)
    for d, val in (w or {}).items():
        ws[d] = P(field, n, val) if isinstance(val, str) else val
    if w0 is not None:
        ws[0] = SparsePoly.constant(field, n, w0)
    return LocalModel(params=params, field=field, q=tuple(qs), w=tuple(ws))


@st.composite
def sparse_polys(draw, field=QQ, max_nvars=3, max_terms=5, max_exp=3, nvars=None):
    n = nvars if nvars is not None else draw(st.integers(1, max_nvars))
    nterms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(nterms):
        exp = tuple(draw(st.integers(0, max_exp)) for _ in range(n))
        coeff = draw(st.integers(-9, 9))
        if coeff:
            terms[exp] = field.coerce(coeff)
    return SparsePoly(field, n, terms)


@pytest.fixture
def rng():
    return random.Random(20240)


@pytest.fixture(scope="session")
def F3():
    return GF(3)


@pytest.fixture(scope="session")
def F5():
    return GF(5)
