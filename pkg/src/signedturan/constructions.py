"""Named signed graphs."""

from __future__ import annotations

from itertools import combinations

from .graph import SignedGraph


def gamma_construction(n: int, r: int) -> SignedGraph:
    """All-positive K_{n-1} on 1..n-1 plus vertex 0 joined negatively to 1 and
    positively to 2..r-1.

    Has n(n-1)/2 - (n-r) edges, is unbalanced and contains no unbalanced
    K_{r+1}.
    """
    if not 3 <= r <= n - 1:
        raise ValueError(f"need 3 <= r <= n-1, got n={n}, r={r}")
    edges = [(0, 1, -1)] + [(0, v, 1) for v in range(2, r)]
    edges += [(u, v, 1) for u, v in combinations(range(1, n), 2)]
    return SignedGraph(n, edges)


def turan_part_sizes(n: int, r: int) -> list[int]:
    if r < 1 or n < 0:
        raise ValueError(f"need r >= 1 and n >= 0, got n={n}, r={r}")
    q, extra = divmod(n, r)
    return [q + 1] * extra + [q] * (r - extra)


def turan_graph(n: int, r: int) -> tuple[SignedGraph, int]:
    """All-positive complete r-partite graph with near-equal parts, and its edge count."""
    sizes = turan_part_sizes(n, r)
    part = []
    for i, size in enumerate(sizes):
        part += [i] * size
    edges = [(u, v, 1) for u, v in combinations(range(n), 2) if part[u] != part[v]]
    g = SignedGraph(n, edges)
    return g, g.e


def complete(n: int, sign: int = 1) -> SignedGraph:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return SignedGraph(n, [(u, v, sign) for u, v in combinations(range(n), 2)])


def unbalanced_complete(k: int) -> SignedGraph:
    """K_k with the single negative edge (0, 1)."""
    if k < 3:
        raise ValueError(f"no unbalanced complete graph on {k} < 3 vertices")
    return SignedGraph(k, [(u, v, -1 if (u, v) == (0, 1) else 1) for u, v in combinations(range(k), 2)])
