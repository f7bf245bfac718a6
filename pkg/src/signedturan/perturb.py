"""Index-monotone edits of signed graphs and the non-negative eigenvector switching.

Five edit kinds are supported. Given a non-negative unit eigenvector ``x`` of
the index:

* ``ADD_POSITIVE``, ``REMOVE_NEGATIVE``, ``FLIP_NEGATIVE`` (edge lists) never
  lower the index; it stays put iff ``x`` vanishes on every touched endpoint.
* ``ROTATE_POSITIVE`` moves positive edge ``ij`` to non-edge ``ik`` and
  ``SWAP_SIGNS`` makes positive ``ij`` negative and negative ``ik`` positive;
  with ``x_j <= x_k`` neither lowers the index, and it stays put iff
  ``x_i = 0`` and ``x_j = x_k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .graph import SignedGraph, switch
from .spectra import eigenpairs, leading_eigenvector

EQUAL_BELOW = 1e-10
DISTINCT_ABOVE = 1e-6
ZERO_TOL = 1e-8


class PerturbationError(ValueError):
    pass


class Kind(enum.Enum):
    ADD_POSITIVE = "add-positive"
    REMOVE_NEGATIVE = "remove-negative"
    FLIP_NEGATIVE = "flip-negative"
    ROTATE_POSITIVE = "rotate-positive"
    SWAP_SIGNS = "swap-signs"

    @property
    def uses_edges(self) -> bool:
        return self in (Kind.ADD_POSITIVE, Kind.REMOVE_NEGATIVE, Kind.FLIP_NEGATIVE)


@dataclass(frozen=True)
class Perturbation:
    kind: Kind
    edges: tuple[tuple[int, int], ...] = ()
    triple: tuple[int, int, int] | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        edges = tuple(tuple(sorted((int(u), int(v)))) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if kind.uses_edges:
            if not edges:
                raise PerturbationError(f"{kind.value} needs at least one edge")
            if len(set(edges)) != len(edges):
                raise PerturbationError(f"{kind.value}: repeated pair in {edges}")
            if self.triple is not None:
                raise PerturbationError(f"{kind.value} takes edges, not a vertex triple")
        else:
            if self.triple is None or len(self.triple) != 3 or len(set(self.triple)) != 3:
                raise PerturbationError(f"{kind.value} needs three distinct vertices (i, j, k)")
            if edges:
                raise PerturbationError(f"{kind.value} takes a vertex triple, not edges")
            object.__setattr__(self, "triple", tuple(int(v) for v in self.triple))


def _check(g: SignedGraph, p: Perturbation) -> None:
    verts = [v for e in p.edges for v in e] + list(p.triple or ())
    bad = [v for v in verts if not 0 <= v < g.n]
    if bad:
        raise PerturbationError(f"vertices {bad} outside 0..{g.n - 1}")
    if any(u == v for u, v in p.edges):
        raise PerturbationError("loop in edge list")
    if p.kind is Kind.ADD_POSITIVE:
        present = [e for e in p.edges if g.adjacent(*e)]
        if present:
            raise PerturbationError(f"add-positive: {present} already edges")
    elif p.kind in (Kind.REMOVE_NEGATIVE, Kind.FLIP_NEGATIVE):
        wrong = [e for e in p.edges if g.sign(*e) != -1]
        if wrong:
            raise PerturbationError(f"{p.kind.value}: {wrong} are not negative edges")
    elif p.kind is Kind.ROTATE_POSITIVE:
        i, j, k = p.triple
        if g.sign(i, j) != 1:
            raise PerturbationError(f"rotate-positive: ({i}, {j}) is not a positive edge")
        if g.adjacent(i, k):
            raise PerturbationError(f"rotate-positive: ({i}, {k}) is already an edge")
    else:
        i, j, k = p.triple
        if g.sign(i, j) != 1:
            raise PerturbationError(f"swap-signs: ({i}, {j}) is not a positive edge")
        if g.sign(i, k) != -1:
            raise PerturbationError(f"swap-signs: ({i}, {k}) is not a negative edge")


def apply(g: SignedGraph, p: Perturbation) -> SignedGraph:
    _check(g, p)
    signs = {(u, v): s for u, v, s in g.edges}
    if p.kind is Kind.ADD_POSITIVE:
        signs.update({e: 1 for e in p.edges})
    elif p.kind is Kind.REMOVE_NEGATIVE:
        for e in p.edges:
            del signs[e]
    elif p.kind is Kind.FLIP_NEGATIVE:
        signs.update({e: 1 for e in p.edges})
    else:
        i, j, k = p.triple
        ij, ik = tuple(sorted((i, j))), tuple(sorted((i, k)))
        if p.kind is Kind.ROTATE_POSITIVE:
            del signs[ij]
            signs[ik] = 1
        else:
            signs[ij] = -1
            signs[ik] = 1
    return SignedGraph(g.n, [(u, v, s) for (u, v), s in signs.items()])


def rayleigh_increment(x, p: Perturbation) -> float:
    """x^T (A' - A) x in closed form for the edit ``p``."""
    x = np.asarray(x, dtype=float)
    if p.kind.uses_edges:
        total = sum(x[u] * x[v] for u, v in p.edges)
        return float((4.0 if p.kind is Kind.FLIP_NEGATIVE else 2.0) * total)
    i, j, k = p.triple
    return float((2.0 if p.kind is Kind.ROTATE_POSITIVE else 4.0) * x[i] * (x[k] - x[j]))


def nonneg_switch_set(g: SignedGraph) -> tuple[frozenset[int], np.ndarray]:
    """Vertices carrying negative entries of a leading unit eigenvector, and that vector."""
    if g.n == 0:
        return frozenset(), np.zeros(0)
    x = leading_eigenvector(g)
    if x.sum() < 0:
        x = -x
    return frozenset(v for v in range(g.n) if x[v] < 0), x


def nonneg_switch(g: SignedGraph) -> tuple[SignedGraph, np.ndarray]:
    """Switch ``g`` so that the index has an entrywise non-negative unit eigenvector."""
    u_set, x = nonneg_switch_set(g)
    return switch(g, u_set), np.abs(x)


def precondition_holds(x, p: Perturbation, slack: float = 1e-10) -> bool:
    """Eigenvector side-conditions: ``x >= 0``, plus ``x_j <= x_k`` for triples."""
    x = np.asarray(x, dtype=float)
    if np.any(x < -slack):
        return False
    if p.kind.uses_edges:
        return True
    _, j, k = p.triple
    return x[j] <= x[k] + slack


def equality_condition(x, p: Perturbation, zero_tol: float = ZERO_TOL) -> bool:
    """The eigenvector condition characterising an unchanged index."""
    x = np.asarray(x, dtype=float)
    if p.kind.uses_edges:
        ends = {v for e in p.edges for v in e}
        return all(abs(x[v]) <= zero_tol for v in ends)
    i, j, k = p.triple
    return abs(x[i]) <= zero_tol and abs(x[j] - x[k]) <= zero_tol


@dataclass
class EqualityDiagnosis:
    kind: str
    index_before: float
    index_after: float
    delta: float
    precondition: bool
    degenerate: bool
    index_unchanged: bool | None
    condition_met: bool
    rayleigh: float
    rayleigh_expected: float
    notes: list[str] = field(default_factory=list)

    @property
    def agree(self) -> bool | None:
        if self.index_unchanged is None:
            return None
        return self.index_unchanged == self.condition_met

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "index_before": self.index_before,
            "index_after": self.index_after,
            "delta": self.delta,
            "precondition": self.precondition,
            "degenerate": self.degenerate,
            "index_unchanged": self.index_unchanged,
            "condition_met": self.condition_met,
            "agree": self.agree,
            "rayleigh": self.rayleigh,
            "rayleigh_expected": self.rayleigh_expected,
            "notes": list(self.notes),
        }


def equality_diagnosis(g: SignedGraph, p: Perturbation, x=None) -> EqualityDiagnosis:
    """Compare the index change of ``apply(g, p)`` with the eigenvector condition.

    ``x`` defaults to the solver's leading eigenvector of ``g``. A change in
    the band ``[1e-10, 1e-6]`` is too close to call: ``index_unchanged`` is
    ``None`` there.
    """
    h = apply(g, p)
    values, vectors = eigenpairs(g)
    if x is None:
        x = vectors[:, 0]
    x = np.asarray(x, dtype=float)
    before = float(values[0])
    after = float(eigenpairs(h)[0][0])
    delta = after - before
    if abs(delta) < EQUAL_BELOW:
        unchanged = True
    elif abs(delta) > DISTINCT_ABOVE:
        unchanged = False
    else:
        unchanged = None
    a_after = h.sign_matrix().astype(float)
    notes = []
    degenerate = g.n > 1 and values[0] - values[1] < 1e-8
    if degenerate:
        notes.append("index is repeated; the eigenvector is not unique")
    return EqualityDiagnosis(
        kind=p.kind.value,
        index_before=before,
        index_after=after,
        delta=delta,
        precondition=precondition_holds(x, p),
        degenerate=bool(degenerate),
        index_unchanged=unchanged,
        condition_met=equality_condition(x, p),
        rayleigh=float(x @ a_after @ x - before),
        rayleigh_expected=rayleigh_increment(x, p),
        notes=notes,
    )


def zero_entry_bound(g: SignedGraph, x=None, tol: float = 1e-9, zero_tol: float = ZERO_TOL):
    """Check: index > n - k forces at most k - 2 zero entries in a unit eigenvector.

    Uses the smallest qualifying ``k``. Returns ``(holds, zeros, allowed)``.
    """
    values, vectors = eigenpairs(g)
    if x is None:
        x = vectors[:, 0]
    lam = float(values[0])
    k = int(np.floor(g.n - lam + tol)) + 1
    zeros = int(np.sum(np.abs(x) <= zero_tol))
    allowed = k - 2
    return zeros <= allowed, zeros, allowed
