import os
import random

import pytest

# recompute separator and partition invariants on every call
os.environ.setdefault("BIDEPTAS_CHECK", "1")

from bideptas.graph import Graph  # noqa: E402


def graph_of(n, edges):
    return Graph(n, [(min(u, v), max(u, v)) for u, v in edges])


def cycle(n):
    return graph_of(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return graph_of(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return graph_of(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


def star(k):
    return graph_of(k + 1, [(0, i) for i in range(1, k + 1)])


@pytest.fixture
def rng():
    return random.Random(12345)
