import random

import pytest

from invdiam.core import LabelledGraph, Orientation, build_graph
from invdiam import families


def rtree(n: int, seed: int) -> LabelledGraph:
    return families.random_tree(n, seed)


def rconn(n: int, m: int, seed: int) -> LabelledGraph:
    return families.random_connected(n, max(m, n - 1), seed)


def rorient(g: LabelledGraph, rng: random.Random) -> Orientation:
    return Orientation(g, rng.getrandbits(g.m) if g.m else 0)


@pytest.fixture
def k3() -> LabelledGraph:
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4() -> LabelledGraph:
    return families.complete(4)


@pytest.fixture
def p5() -> LabelledGraph:
    return families.path(5)
