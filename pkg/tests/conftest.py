from __future__ import annotations

import numpy as np
import pytest

import resolv as rv


def clique_edges(base: int, size: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(base, base + size)
            for j in range(i + 1, base + size)]


def random_multigraph(rng: np.random.Generator, n_max: int = 8):
    """Small random multigraph with duplicates and self-loops allowed."""
    n = int(rng.integers(3, n_max + 1))
    edges = []
    for _ in range(int(rng.integers(n, 3 * n))):
        edges.append((int(rng.integers(n)), int(rng.integers(n)),
                      int(rng.integers(1, 4))))
    return n, edges


def as_mapping(assignment) -> dict[int, int]:
    return {i: int(c) for i, c in enumerate(np.asarray(assignment))}


@pytest.fixture
def two_triangles() -> rv.Graph:
    return rv.Graph.from_edges(6, [(0, 1), (1, 2), (0, 2),
                                   (3, 4), (4, 5), (3, 5), (2, 3)])


@pytest.fixture
def two_k6_bridge() -> rv.Graph:
    return rv.Graph.from_edges(12, clique_edges(0, 6) + clique_edges(6, 6) + [(0, 6)])
