"""Shared strategies, generators and cached scans for the test suite."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np
from hypothesis import strategies as st

from signedturan.graph import SignedGraph
from signedturan.search import scan

# lines printed at the end of the run, one per acceptance criterion
ACCEPTANCE_LINES: dict[str, str] = {}


@st.composite
def signed_graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    size = n * (n - 1) // 2
    states = draw(st.lists(st.sampled_from((0, 1, -1)), min_size=size, max_size=size))
    edges = [(u, v, s) for (u, v), s in zip(combinations(range(n), 2), states) if s]
    return SignedGraph(n, edges)


@st.composite
def graphs_with_subset(draw, min_n=1, max_n=7):
    g = draw(signed_graphs(min_n, max_n))
    u_set = draw(st.sets(st.integers(0, g.n - 1), max_size=g.n)) if g.n else set()
    return g, frozenset(u_set)


@st.composite
def graphs_with_perm(draw, min_n=1, max_n=7):
    g = draw(signed_graphs(min_n, max_n))
    return g, draw(st.permutations(list(range(g.n))))


def random_graph(rng: np.random.Generator, n: int, p_edge=0.6, p_neg=0.4) -> SignedGraph:
    edges = []
    for u, v in combinations(range(n), 2):
        if rng.random() < p_edge:
            edges.append((u, v, -1 if rng.random() < p_neg else 1))
    return SignedGraph(n, edges)


@lru_cache(maxsize=None)
def full_scan(n: int):
    """One scan per order with every r, the triangle family and the lemma checks."""
    return scan(n, list(range(3, n)), index=True, c3=True, lemmas=True)
