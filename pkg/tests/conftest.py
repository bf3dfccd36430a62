"""
Pytest Configuration and Fixtures

Shared fixtures for all tests.
"""

import os
import random

import pytest

# Pin the environment before importing the package
os.environ["VDEC_SEED"] = "0"
os.environ["VDEC_LOG_LEVEL"] = "WARNING"
os.environ["VDEC_BENCH_JOBS"] = "1"

from vdec.config import get_settings
from vdec.services.generators import cycle, gnp, path, random_tree, star
from vdec.services.graph_core import Graph, is_vdec


@pytest.fixture(scope="session")
def settings():
    """Get test settings."""
    return get_settings()


@pytest.fixture
def c5() -> Graph:
    """The 5-cycle, k(C5) = 4."""
    return cycle(5)


@pytest.fixture
def p3() -> Graph:
    """The path on three vertices, k(P3) = 2."""
    return path(3)


@pytest.fixture
def k2() -> Graph:
    """A single edge, not vdec."""
    return Graph(2, [(0, 1)])


@pytest.fixture
def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def small_corpus(count: int, seed: int = 0, max_n: int = 12):
    """Seeded mix of small vdec graphs: random G(n,p), trees, cycles, paths, stars."""
    rng = random.Random(seed)
    graphs = []
    while len(graphs) < count:
        kind = rng.choice(["gnp", "gnp", "tree", "cycle", "path", "star"])
        n = rng.randint(3, max_n)
        if kind == "gnp":
            g = gnp(n, rng.choice([0.2, 0.4, 0.6]), rng.randrange(10**6))
        elif kind == "tree":
            g = random_tree(n, rng.randrange(10**6))
        elif kind == "cycle":
            g = cycle(n)
        elif kind == "path":
            g = path(n)
        else:
            g = star(n - 1)
        if is_vdec(g):
            graphs.append(g)
    return graphs


def acceptance_corpus(seed: int = 0):
    """
    At least 200 vdec graphs: cycles and paths up to 20 vertices, stars up
    to 20 leaves, random trees up to 30 vertices and G(n,p) up to 40
    vertices with p in {0.1, 0.3, 0.5}.
    """
    rng = random.Random(seed)
    graphs = [cycle(n) for n in range(3, 21)] + [path(n) for n in range(3, 21)]
    graphs += [star(leaves) for leaves in range(2, 21)]
    graphs += [random_tree(rng.randint(3, 30), rng.randrange(10**6)) for _ in range(60)]
    while len(graphs) < 235:
        g = gnp(rng.randint(5, 40), rng.choice([0.1, 0.3, 0.5]), rng.randrange(10**6))
        if is_vdec(g):
            graphs.append(g)
    return graphs

