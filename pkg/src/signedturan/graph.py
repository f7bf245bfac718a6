"""Signed graphs: representation, switching, negation, canonical forms.

Vertices are ``0..n-1``. A graph is immutable once built; every operation
returns a new graph.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable
from functools import lru_cache

import numpy as np


class GraphError(ValueError):
    """Invalid signed-graph data."""


class DuplicateEdgeError(GraphError):
    pass


class LoopError(GraphError):
    pass


class VertexRangeError(GraphError):
    pass


class SignError(GraphError):
    pass


Edge = tuple[int, int, int]


class SignedGraph:
    """Simple graph on ``0..n-1`` with a sign in {+1, -1} on each edge.

    ``edges`` is kept sorted by ``(u, v)`` with ``u < v``; ``sign(u, v)`` is an
    O(1) lookup returning 0 for non-adjacent pairs.
    """

    __slots__ = ("n", "edges", "_signs")

    def __init__(self, n: int, edges: Iterable[tuple[int, int, int]] = ()):
        n = int(n)
        if n < 0:
            raise VertexRangeError(f"vertex count must be non-negative, got {n}")
        signs = np.zeros((n, n), dtype=np.int8)
        normalized = []
        for u, v, s in edges:
            u, v, s = int(u), int(v), int(s)
            if u == v:
                raise LoopError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            if s not in (1, -1):
                raise SignError(f"edge ({u}, {v}) has sign {s}, expected +1 or -1")
            if u > v:
                u, v = v, u
            if signs[u, v]:
                raise DuplicateEdgeError(f"pair ({u}, {v}) listed twice")
            signs[u, v] = signs[v, u] = s
            normalized.append((u, v, s))
        normalized.sort()
        signs.setflags(write=False)
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(normalized)
        self._signs = signs

    @classmethod
    def from_matrix(cls, a) -> SignedGraph:
        a = np.asarray(a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError(f"adjacency matrix must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise GraphError("adjacency matrix is not symmetric")
        if np.any(np.diag(a) != 0):
            raise LoopError("adjacency matrix has a nonzero diagonal")
        if not np.all(np.isin(a, (-1, 0, 1))):
            raise SignError("adjacency entries must lie in {-1, 0, 1}")
        n = a.shape[0]
        iu, iv = np.nonzero(np.triu(a, 1))
        return cls(n, [(int(u), int(v), int(a[u, v])) for u, v in zip(iu, iv)])

    @property
    def e(self) -> int:
        return len(self.edges)

    def sign(self, u: int, v: int) -> int:
        return int(self._signs[u, v])

    def adjacent(self, u: int, v: int) -> bool:
        return self._signs[u, v] != 0

    def neighbors(self, v: int) -> list[int]:
        return [int(w) for w in np.flatnonzero(self._signs[v])]

    def degree(self, v: int) -> int:
        return int(np.count_nonzero(self._signs[v]))

    def negative_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, s in self.edges if s < 0]

    def sign_matrix(self) -> np.ndarray:
        """Read-only ``n x n`` int8 view of the signs."""
        return self._signs

    def induced(self, vertices: Iterable[int]) -> SignedGraph:
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        return SignedGraph(
            len(vs),
            [(index[u], index[v], s) for u, v, s in self.edges if u in index and v in index],
        )

    def relabel(self, perm) -> SignedGraph:
        """Graph whose vertex ``i`` is vertex ``perm[i]`` of this one."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n)):
            raise GraphError(f"{perm} is not a permutation of 0..{self.n - 1}")
        return SignedGraph.from_matrix(self._signs[np.ix_(perm, perm)])

    def __eq__(self, other):
        if not isinstance(other, SignedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        body = ", ".join(f"({u},{v},{'+' if s > 0 else '-'})" for u, v, s in self.edges)
        return f"SignedGraph({self.n}, [{body}])"


def new_graph(n: int, edges: Iterable[tuple[int, int, int]] = ()) -> SignedGraph:
    return SignedGraph(n, edges)


def _check_switch_set(g: SignedGraph, u_set) -> frozenset[int]:
    u_set = frozenset(int(u) for u in u_set)
    bad = [u for u in u_set if not 0 <= u < g.n]
    if bad:
        raise VertexRangeError(f"switch set members {sorted(bad)} outside 0..{g.n - 1}")
    return u_set


def switch(g: SignedGraph, u_set) -> SignedGraph:
    """Flip the sign of every edge with exactly one endpoint in ``u_set``."""
    u_set = _check_switch_set(g, u_set)
    return SignedGraph(
        g.n, [(u, v, -s if (u in u_set) != (v in u_set) else s) for u, v, s in g.edges]
    )


def negate(g: SignedGraph) -> SignedGraph:
    return SignedGraph(g.n, [(u, v, -s) for u, v, s in g.edges])


def underlying(g: SignedGraph) -> SignedGraph:
    return SignedGraph(g.n, [(u, v, 1) for u, v, _ in g.edges])


def adjacency_matrix(g: SignedGraph) -> np.ndarray:
    return g.sign_matrix().astype(np.int64)


def signature_matrix(n: int, u_set) -> np.ndarray:
    """Diagonal ``S_U``: ``-1`` on members of ``u_set``, ``+1`` elsewhere."""
    d = np.ones(n, dtype=np.int64)
    d[list(u_set)] = -1
    return np.diag(d)


def bfs_forest(n: int, adjacent) -> list[tuple[int, int]]:
    """Spanning-forest edges ``(parent, child)`` in discovery order.

    Each component is searched breadth-first from its smallest vertex with
    neighbours taken in increasing order. ``adjacent(u, v)`` is any boolean
    predicate; the switching-class scan reuses this with bitmask graphs.
    """
    seen = [False] * n
    tree = []
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in range(n):
                if not seen[w] and adjacent(u, w):
                    seen[w] = True
                    tree.append((u, w))
                    queue.append(w)
    return tree


def forest_switching(g: SignedGraph) -> list[int]:
    """Vertex signs ``s`` such that ``s_u * s_v * sign(u, v) = +1`` on the BFS forest."""
    s = [1] * g.n
    for u, w in bfs_forest(g.n, g.adjacent):
        s[w] = s[u] * g.sign(u, w)
    return s


def canonical_switch(g: SignedGraph) -> SignedGraph:
    """Representative of the switching class with every BFS-forest edge positive.

    For a fixed labelling two graphs are switching equivalent iff their
    canonical forms coincide.
    """
    s = forest_switching(g)
    return SignedGraph(g.n, [(u, v, sign * s[u] * s[v]) for u, v, sign in g.edges])


def canonical_switch_set(g: SignedGraph) -> frozenset[int]:
    """The switch set that :func:`canonical_switch` applies."""
    return frozenset(v for v, sv in enumerate(forest_switching(g)) if sv < 0)


def _forest_normalize(mats: np.ndarray, tree) -> np.ndarray:
    """Canonical forms of a stack of sign matrices sharing one underlying graph."""
    s = np.ones(mats.shape[:2], dtype=np.int64)
    for u, w in tree:
        s[:, w] = s[:, u] * mats[:, u, w]
    return mats * s[:, :, None] * s[:, None, :]


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def are_switching_isomorphic(g1: SignedGraph, g2: SignedGraph) -> bool:
    """True iff a relabelling of ``g2`` followed by a switching yields ``g1``.

    Brute force over the ``n!`` relabellings. Those carrying the underlying
    graph of ``g2`` onto that of ``g1`` share its BFS forest, so their
    canonical forms are computed together and compared with ``g1``'s. Meant
    for ``n <= 10``.
    """
    if g1.n != g2.n or g1.e != g2.e:
        return False
    n = g1.n
    if sorted(g1.degree(v) for v in range(n)) != sorted(g2.degree(v) for v in range(n)):
        return False
    s1 = g1.sign_matrix().astype(np.int64)
    s2 = g2.sign_matrix().astype(np.int64)
    a1 = s1 != 0
    a2 = s2 != 0
    tree = bfs_forest(n, lambda u, w: a1[u, w])
    target = _forest_normalize(s1[None], tree)[0]
    perms = _permutations(n)
    for start in range(0, len(perms), 5040):
        block = perms[start : start + 5040]
        permuted = a2[block[:, :, None], block[:, None, :]]
        hits = block[(permuted == a1).all(axis=(1, 2))]
        if hits.size:
            cand = _forest_normalize(s2[hits[:, :, None], hits[:, None, :]], tree)
            if (cand == target).all(axis=(1, 2)).any():
                return True
    return False
