import os
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nilkilling.exterior import ExteriorForm, mask_of
from nilkilling.linalg import zeros

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = os.path.join(os.path.dirname(__file__), "data")

rationals = st.builds(Fraction, st.integers(-4, 4), st.sampled_from([1, 2, 3]))


@st.composite
def forms(draw, dim, degree=None):
    k = draw(st.integers(0, dim)) if degree is None else degree
    masks = [mask_of(c) for c in combinations(range(dim), k)]
    chosen = draw(st.lists(st.sampled_from(masks), max_size=4, unique=True)) if masks else []
    return ExteriorForm(dim, k, {m: draw(rationals) for m in chosen})


@st.composite
def skew_matrices(draw, n):
    m = zeros(n)
    for i in range(n):
        for j in range(i + 1, n):
            c = draw(rationals)
            m[i, j], m[j, i] = c, -c
    return m


@pytest.fixture
def data_dir():
    return DATA
