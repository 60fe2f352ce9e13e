from __future__ import annotations

import sys
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from tiltstab.chern import ProjectedChern
from tiltstab.geometry import CohVector, DivisorClass, make_model

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

PRODUCT_MODELS = ("P1xS", "P2xC", "P1xP1xC")


def fractions(max_num: int = 12, max_den: int = 6, nonzero: bool = False, positive: bool = False):
    num = st.integers(1 if positive else -max_num, max_num)
    if nonzero and not positive:
        num = num.filter(bool)
    return st.builds(Fraction, num, st.integers(1, max_den))


def projected(**kw):
    f = fractions(**kw)
    return st.builds(ProjectedChern, f, f, f, f)


def coh_vectors(model, max_num: int = 8, max_den: int = 4):
    f = fractions(max_num, max_den)
    n = model.rank
    return st.builds(
        lambda r, c1, c2, c3: CohVector(r, DivisorClass(tuple(c1)), tuple(c2), c3),
        f,
        st.lists(f, min_size=n, max_size=n),
        st.lists(f, min_size=n, max_size=n),
        f,
    )


@pytest.fixture(params=PRODUCT_MODELS)
def product_model(request):
    return make_model(request.param, d=1) if request.param == "P1xS" else make_model(request.param)


@pytest.fixture
def p2c():
    return make_model("P2xC")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
