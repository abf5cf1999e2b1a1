import itertools
import random

import pytest
from hypothesis import strategies as st

from pfdecomp.graph import Multigraph


def k4() -> Multigraph:
    return Multigraph(4, itertools.combinations(range(4), 2))


def cycle(n: int) -> Multigraph:
    return Multigraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Multigraph:
    return Multigraph(n, [(i, i + 1) for i in range(n - 1)])


def parallel(count: int) -> Multigraph:
    return Multigraph(2, [(0, 1)] * count)


def random_multigraph(rng: random.Random, max_v: int = 10, max_e: int = 20) -> Multigraph:
    n = rng.randint(2, max_v)
    m = rng.randint(1, max_e)
    edges = []
    for _ in range(m):
        u, v = rng.sample(range(n), 2)
        edges.append((u, v))
    return Multigraph(n, edges)


NAMED = {
    "k4": k4(),
    "c5": cycle(5),
    "p6": path(6),
    "single_edge": Multigraph(2, [(0, 1)]),
    "four_parallel": parallel(4),
    "five_parallel": parallel(5),
    "theta": parallel(3),
    "k4_pendant": Multigraph(5, list(itertools.combinations(range(4), 2)) + [(3, 4)]),
    "k4_plus_path": Multigraph(10, list(itertools.combinations(range(4), 2)) + [(i, i + 1) for i in range(4, 9)]),
    "k4_extra": Multigraph(4, list(itertools.combinations(range(4), 2)) + [(0, 1)]),
}


@st.composite
def multigraphs(draw, max_v=8, max_e=16, min_e=0):
    n = draw(st.integers(2, max_v))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] != t[1])
    edges = draw(st.lists(pairs, min_size=min_e, max_size=max_e))
    return Multigraph(n, edges)


@pytest.fixture
def named():
    return NAMED
