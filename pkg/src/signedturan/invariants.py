"""Balance, negative cycles, clique numbers and forbidden complete subgraphs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .graph import SignedGraph, bfs_forest, forest_switching, negate, switch
from .spectra import spectrum


class CheckFailed(AssertionError):
    """A checked mathematical statement did not hold on a concrete instance."""


@dataclass(frozen=True)
class BalanceCertificate:
    """Either a switch set making the graph all-positive, or a negative cycle."""

    balanced: bool
    switch_set: frozenset[int] | None = None
    cycle: tuple[int, ...] | None = None

    def verify(self, g: SignedGraph) -> bool:
        if self.balanced:
            return all(s > 0 for _, _, s in switch(g, self.switch_set).edges)
        return cycle_sign(g, self.cycle) == -1


def cycle_sign(g: SignedGraph, cycle) -> int:
    """Sign product along a closed vertex sequence; raises on a missing edge."""
    prod = 1
    closed = list(cycle) + [cycle[0]]
    for a, b in zip(closed, closed[1:]):
        s = g.sign(a, b)
        if s == 0:
            raise ValueError(f"({a}, {b}) is not an edge")
        prod *= s
    return prod


def _normalize_cycle(cycle: list[int]) -> tuple[int, ...]:
    i = cycle.index(min(cycle))
    c = cycle[i:] + cycle[:i]
    if len(c) > 2 and c[-1] < c[1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


def is_balanced(g: SignedGraph) -> tuple[bool, BalanceCertificate]:
    s = forest_switching(g)
    for u, v, sign in g.edges:
        if sign * s[u] * s[v] < 0:
            break
    else:
        u_set = frozenset(v for v, sv in enumerate(s) if sv < 0)
        return True, BalanceCertificate(True, switch_set=u_set)
    # (u, v) is a non-forest edge negative after normalisation: close its fundamental cycle
    parent = {child: par for par, child in bfs_forest(g.n, g.adjacent)}
    up = [u]
    while up[-1] in parent:
        up.append(parent[up[-1]])
    on_up = {x: i for i, x in enumerate(up)}
    down = [v]
    while down[-1] not in on_up:
        down.append(parent[down[-1]])
    cycle = up[: on_up[down[-1]] + 1] + down[-2::-1]
    return False, BalanceCertificate(False, cycle=_normalize_cycle(cycle))


def negative_girth(g: SignedGraph) -> int | None:
    """Length of a shortest negative cycle, ``None`` when balanced.

    Breadth-first search on the two-sheeted cover: a shortest walk from
    ``(v, +)`` to ``(v, -)`` is a shortest negative closed walk through ``v``,
    and the shortest such walk over all ``v`` is a cycle.
    """
    best = None
    nbrs = [[(w, g.sign(v, w)) for w in g.neighbors(v)] for v in range(g.n)]
    for root in range(g.n):
        dist = {(root, 1): 0}
        queue = deque([(root, 1)])
        while queue:
            u, par = queue.popleft()
            d = dist[(u, par)]
            if best is not None and d + 1 >= best:
                break
            for w, s in nbrs[u]:
                state = (w, par * s)
                if state not in dist:
                    dist[state] = d + 1
                    if state == (root, -1):
                        best = d + 1
                        queue.clear()
                        break
                    queue.append(state)
    return best


def _bitsets(g: SignedGraph) -> list[int]:
    out = [0] * g.n
    for u, v, _ in g.edges:
        out[u] |= 1 << v
        out[v] |= 1 << u
    return out


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def clique_number(g: SignedGraph) -> int:
    """Order of a largest clique of the underlying graph (branch and bound)."""
    adj = _bitsets(g)
    best = 0

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + cand.bit_count() <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            grow(size + 1, cand & adj[v])

    grow(0, (1 << g.n) - 1)
    return best


def complete_is_balanced(g: SignedGraph, vertices) -> bool:
    """Balance of the complete subgraph on ``vertices`` (assumed pairwise adjacent).

    Only triangles through the smallest vertex need checking.
    """
    vs = sorted(vertices)
    a = vs[0]
    for b, c in combinations(vs[1:], 2):
        if g.sign(a, b) * g.sign(a, c) * g.sign(b, c) < 0:
            return False
    return True


def cliques_from_bitsets(adj: list[int], k: int | None = None):
    """Cliques of a graph given as neighbour bitsets, as sorted tuples in
    lexicographic order; every clique of order >= 1, or only those of order ``k``."""

    def extend(clique: list[int], cand: int):
        if k is None or len(clique) == k:
            yield tuple(clique)
            if k is not None:
                return
        if k is not None and len(clique) + cand.bit_count() < k:
            return
        for v in _bits(cand):
            clique.append(v)
            yield from extend(clique, cand & adj[v] & ~((1 << (v + 1)) - 1))
            clique.pop()

    for v in range(len(adj)):
        yield from extend([v], adj[v] & ~((1 << (v + 1)) - 1))


def iter_cliques(g: SignedGraph, k: int | None = None):
    return cliques_from_bitsets(_bitsets(g), k)


def _sign_bitsets(g: SignedGraph) -> tuple[list[int], list[int]]:
    pos, neg = [0] * g.n, [0] * g.n
    for u, v, sgn in g.edges:
        side = pos if sgn > 0 else neg
        side[u] |= 1 << v
        side[v] |= 1 << u
    return pos, neg


def _balanced_search(g: SignedGraph, k: int | None):
    """Depth-first search over balanced cliques in lexicographic order.

    Balance is hereditary, so a candidate ``w`` survives the addition of
    ``v`` only if the triangle through the first clique vertex, ``v`` and
    ``w`` is positive. Returns the first clique of order ``k``, or with
    ``k=None`` a largest balanced clique.
    """
    pos, neg = _sign_bitsets(g)
    best: list[int] = []

    def grow(clique: list[int], cand: int):
        nonlocal best
        if k is not None and len(clique) == k:
            return tuple(clique)
        if len(clique) > len(best):
            best = list(clique)
        need = k if k is not None else len(best) + 1
        while cand:
            if len(clique) + cand.bit_count() < need:
                return None
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            if clique:
                a = clique[0]
                if pos[a] >> v & 1:
                    keep = (pos[v] & pos[a]) | (neg[v] & neg[a])
                else:
                    keep = (pos[v] & neg[a]) | (neg[v] & pos[a])
            else:
                keep = pos[v] | neg[v]
            clique.append(v)
            found = grow(clique, cand & keep)
            clique.pop()
            if found is not None:
                return found
            need = k if k is not None else len(best) + 1
        return None

    found = grow([], (1 << g.n) - 1)
    return found if k is not None else tuple(best)


def balanced_clique_number(g: SignedGraph) -> int:
    """Order of a largest vertex subset inducing a balanced complete graph."""
    return len(_balanced_search(g, None))


def _first_clique(adj: list[int], cand: int, k: int) -> list[int] | None:
    """Lexicographically first ``k``-clique inside the vertex set ``cand``."""
    if k == 0:
        return []
    while cand and cand.bit_count() >= k:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        rest = _first_clique(adj, cand & adj[v], k - 1)
        if rest is not None:
            return [v] + rest
    return None


def find_unbalanced_complete(g: SignedGraph, k: int) -> tuple[int, ...] | None:
    """A ``k``-subset inducing an unbalanced complete graph, or ``None``.

    A complete signed graph is unbalanced iff it has a negative triangle, so
    negative triangles are tried in lexicographic order and each is extended
    by a clique of its common neighbourhood. ``None`` means the graph has no
    member of the unbalanced-``K_k`` family; that is automatic for ``k > n``
    and for ``k = 2``.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if k > g.n or k < 3:
        return None
    adj = _bitsets(g)
    for a, b, c in iter_cliques(g, 3):
        if g.sign(a, b) * g.sign(a, c) * g.sign(b, c) < 0:
            rest = _first_clique(adj, adj[a] & adj[b] & adj[c], k - 3)
            if rest is not None:
                return tuple(sorted((a, b, c, *rest)))
    return None


def find_balanced_complete(g: SignedGraph, k: int) -> tuple[int, ...] | None:
    """Lexicographically first ``k``-subset inducing a balanced complete graph."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > g.n:
        return None
    return _balanced_search(g, k)


def is_c3_minus_free(g: SignedGraph) -> bool:
    return all(complete_is_balanced(g, t) for t in iter_cliques(g, 3))


def check_radius_equals_index(g: SignedGraph, r: int, tol: float = 1e-9) -> bool:
    """Report whether rho(g) > n-2 and -g has no balanced K_{r+1}.

    When both hold the spectral radius must be attained by the index; a
    violation raises :class:`CheckFailed`.
    """
    if r < 4 or g.n < 2 * r:
        raise ValueError(f"needs r >= 4 and n >= 2r, got n={g.n}, r={r}")
    spec = spectrum(g)
    if not spec.spectral_radius > g.n - 2:
        return False
    if find_balanced_complete(negate(g), r + 1) is not None:
        return False
    if abs(spec.spectral_radius - spec.index) > tol:
        raise CheckFailed(
            f"rho = {spec.spectral_radius} but index = {spec.index} under the hypotheses"
        )
    return True
