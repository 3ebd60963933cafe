import os
import sys
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from besk.core import HyperGraph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def hypergraphs(draw, n_min=3, n_max=7, r_min=2, r_max=4, max_edges=8):
    r = draw(st.integers(r_min, r_max))
    n = draw(st.integers(max(n_min, r), max(n_max, r)))
    pool = list(combinations(range(n), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=min(max_edges, len(pool))))
    return HyperGraph(n, r, tuple(edges))


@pytest.fixture
def diamond3():
    return HyperGraph(4, 3, ((0, 1, 2), (1, 2, 3)))


@pytest.fixture
def diamond4():
    return HyperGraph(6, 4, ((0, 1, 2, 3), (0, 1, 4, 5)))


@pytest.fixture
def fano():
    return HyperGraph(7, 3, ((0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)))


# a G_6-free r = 4 graph whose single 2-cluster is built from 1-clusters of sizes 2, 3, 2
CHAIN_EDGES = (
    (0, 1, 2, 3),
    (0, 1, 4, 5),
    (2, 4, 6, 7),
    (6, 7, 8, 9),
    (8, 9, 10, 11),
    (10, 13, 14, 15),
    (11, 13, 14, 16),
)


@pytest.fixture
def chain():
    return HyperGraph(17, 4, CHAIN_EDGES)
