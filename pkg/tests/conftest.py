"""Shared graphs, the worked rebuild example and a seeded random multigraph corpus."""

import random

import pytest

from gonality.generators import WorkedExample, ppchange_example, table_corpus
from gonality.graph import MultiGraph

RANDOM_SEED = 20240611
RANDOM_GRAPHS = 200


def random_connected_multigraph(
    rng: random.Random, max_vertices: int = 8, max_edges: int = 14
) -> MultiGraph:
    """A random spanning tree plus random extra edges, parallels and loops allowed."""
    n = rng.randint(2, max_vertices)
    names = [str(i) for i in range(n)]
    pairs = [(names[i], names[rng.randrange(i)]) for i in range(1, n)]
    extra = rng.randint(0, max_edges - len(pairs))
    for _ in range(extra):
        pairs.append((rng.choice(names), rng.choice(names)))
    return MultiGraph.from_pairs(pairs, names)


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, MultiGraph]]:
    """K_n (n=3..6), C_n (n=3..8), K_3,3 and B_n (n=2..5)."""
    return table_corpus()


@pytest.fixture(scope="session")
def worked() -> WorkedExample:
    return ppchange_example()


@pytest.fixture(scope="session")
def random_corpus() -> list[MultiGraph]:
    rng = random.Random(RANDOM_SEED)
    return [random_connected_multigraph(rng) for _ in range(RANDOM_GRAPHS)]


@pytest.fixture(scope="session")
def small_random_corpus() -> list[MultiGraph]:
    rng = random.Random(RANDOM_SEED + 1)
    return [random_connected_multigraph(rng, max_vertices=5, max_edges=7) for _ in range(40)]
