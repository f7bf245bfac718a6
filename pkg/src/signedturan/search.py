"""Exhaustive scans over switching classes of small signed graphs.

A class is indexed by a pair ``(code, signing)``. ``code`` is a bitmask over
the vertex pairs ``(u, v)``, ``u < v``, in lexicographic order and fixes the
labelled underlying graph. Its BFS spanning forest (see
:func:`signedturan.graph.bfs_forest`) is kept all-positive; ``signing`` has one
bit per remaining edge, set when that edge is negative. Every signed graph on
``n`` labelled vertices is switching equivalent to exactly one such pair, and
the graph a pair describes is a fixed point of
:func:`~signedturan.graph.canonical_switch`.

Balanced classes are exactly those with ``signing == 0``.
"""

from __future__ import annotations

import logging
import math
import os
import pickle
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import kernels
from .constructions import gamma_construction
from .graph import SignedGraph, are_switching_isomorphic, bfs_forest
from .invariants import cliques_from_bitsets, find_unbalanced_complete

logger = logging.getLogger(__name__)

MAX_ORDER = 7
INDEX_TOL = 1e-9
VIOLATION_CAP = 20


@lru_cache(maxsize=None)
def vertex_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@dataclass(frozen=True)
class Layout:
    """Forest split of one labelled underlying graph."""

    n: int
    code: int
    adj: tuple[int, ...]
    tree: tuple[tuple[int, int], ...]
    free_edges: tuple[tuple[int, int], ...]
    bit_of: dict

    @property
    def m(self) -> int:
        return len(self.tree) + len(self.free_edges)

    def graph(self, signing: int) -> SignedGraph:
        edges = [(u, v, 1) for u, v in self.tree]
        edges += [(u, v, -1 if signing >> b & 1 else 1) for b, (u, v) in enumerate(self.free_edges)]
        return SignedGraph(self.n, edges)

    def base_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.tree + self.free_edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def edge_mask(self, *pairs) -> int:
        mask = 0
        for u, v in pairs:
            mask |= self.bit_of.get((min(u, v), max(u, v)), 0)
        return mask

    def star_masks(self, clique) -> list[int]:
        a = clique[0]
        return [self.edge_mask((a, b), (a, c), (b, c)) for b, c in combinations(clique[1:], 2)]


def layout(n: int, code: int) -> Layout:
    pairs = vertex_pairs(n)
    adj = [0] * n
    present = []
    for b, (u, v) in enumerate(pairs):
        if code >> b & 1:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            present.append((u, v))
    tree = bfs_forest(n, lambda u, w: adj[u] >> w & 1)
    tree_set = {(min(u, w), max(u, w)) for u, w in tree}
    free_edges = tuple(e for e in present if e not in tree_set)
    bit_of = {e: 1 << b for b, e in enumerate(free_edges)}
    return Layout(n, code, tuple(adj), tuple(sorted(tree_set)), free_edges, bit_of)


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"enumeration supports 1 <= n <= {MAX_ORDER}, got {n}")


class SwitchingClassIterator:
    """Yields one canonical representative per labelled switching class.

    ``code`` and ``signing`` describe the most recently yielded graph.
    """

    def __init__(self, n: int):
        _check_order(n)
        self.n = n
        self.code = None
        self.signing = None

    def __iter__(self):
        for code in range(1 << len(vertex_pairs(self.n))):
            lay = layout(self.n, code)
            for signing in range(1 << len(lay.free_edges)):
                self.code, self.signing = code, signing
                yield lay.graph(signing)


def enumerate_switching_classes(n: int) -> SwitchingClassIterator:
    return SwitchingClassIterator(n)


def class_count(n: int) -> int:
    """Number of labelled switching classes on ``n`` vertices."""
    _check_order(n)
    return sum(1 << len(layout(n, c).free_edges) for c in range(1 << len(vertex_pairs(n))))


def fewest_negative_edges(g: SignedGraph) -> tuple[int, frozenset[int]]:
    """Minimum number of negative edges over the switching class, with a switch set
    attaining it. Brute force over switch sets avoiding vertex ``n-1``."""
    best, best_set = g.e + 1, frozenset()
    for mask in range(1 << max(g.n - 1, 0)):
        u_set = frozenset(v for v in range(g.n) if mask >> v & 1)
        neg = sum(1 for u, v, s in g.edges if (s < 0) != ((u in u_set) != (v in u_set)))
        if neg < best:
            best, best_set = neg, u_set
    return best, best_set


# -- scanning -----------------------------------------------------------------


@dataclass
class Extremum:
    """Running maximum of an objective with the classes attaining it."""

    exact: bool
    best: float | None = None
    holders: list = field(default_factory=list)  # (code, signing, value)

    def offer(self, code: int, signings, values) -> None:
        if len(signings) == 0:
            return
        values = np.asarray(values)
        top = values.max().item()
        tol = 0 if self.exact else INDEX_TOL
        if self.best is None or top > self.best:
            self.best = top
            self.holders = [h for h in self.holders if h[2] >= top - tol]
        keep = np.flatnonzero(values >= self.best - tol)
        self.holders.extend((code, int(signings[i]), values[i].item()) for i in keep)

    def merge(self, other: Extremum) -> None:
        if other.best is None:
            return
        if self.best is None:
            self.best, self.holders = other.best, list(other.holders)
            return
        self.best = max(self.best, other.best)
        tol = 0 if self.exact else INDEX_TOL
        self.holders = [h for h in self.holders + other.holders if h[2] >= self.best - tol]


@dataclass
class Family:
    """Statistics over unbalanced classes avoiding one forbidden family."""

    free: int = 0
    edges: Extremum = field(default_factory=lambda: Extremum(exact=True))
    value: Extremum = field(default_factory=lambda: Extremum(exact=False))

    def merge(self, other: Family) -> None:
        self.free += other.free
        self.edges.merge(other.edges)
        self.value.merge(other.value)


@dataclass
class LemmaStats:
    checked: int = 0
    worst_slack: dict = field(default_factory=dict)
    violations: dict = field(default_factory=dict)
    violation_count: dict = field(default_factory=dict)
    max_index_classes: int = 0

    def record(self, name: str, slack: np.ndarray, code: int, signings) -> None:
        """``slack`` is bound minus value; negative beyond tolerance is a violation."""
        if slack.size == 0:
            return
        low = float(slack.min())
        self.worst_slack[name] = min(self.worst_slack.get(name, math.inf), low)
        bad = np.flatnonzero(slack < -INDEX_TOL)
        if bad.size:
            self.violation_count[name] = self.violation_count.get(name, 0) + int(bad.size)
            store = self.violations.setdefault(name, [])
            for i in bad[: max(0, VIOLATION_CAP - len(store))]:
                store.append((code, int(signings[i]), float(slack[i])))

    def flag(self, name: str, code: int, signings) -> None:
        signings = list(signings)
        if not signings:
            return
        self.violation_count[name] = self.violation_count.get(name, 0) + len(signings)
        store = self.violations.setdefault(name, [])
        for s in signings[: max(0, VIOLATION_CAP - len(store))]:
            store.append((code, int(s), 0.0))

    def merge(self, other: LemmaStats) -> None:
        self.checked += other.checked
        self.max_index_classes += other.max_index_classes
        for k, v in other.worst_slack.items():
            self.worst_slack[k] = min(self.worst_slack.get(k, math.inf), v)
        for k, v in other.violation_count.items():
            self.violation_count[k] = self.violation_count.get(k, 0) + v
        for k, v in other.violations.items():
            store = self.violations.setdefault(k, [])
            store.extend(v[: max(0, VIOLATION_CAP - len(store))])


@dataclass
class ScanResult:
    n: int
    rs: tuple[int, ...]
    codes: tuple[int, int]
    classes: int = 0
    unbalanced: int = 0
    families: dict = field(default_factory=dict)
    c3: Family | None = None
    lemmas: LemmaStats | None = None
    seconds: float = 0.0

    def merge(self, other: ScanResult) -> ScanResult:
        if (self.n, self.rs) != (other.n, other.rs):
            raise ValueError("cannot merge scans with different parameters")
        self.codes = (min(self.codes[0], other.codes[0]), max(self.codes[1], other.codes[1]))
        self.classes += other.classes
        self.unbalanced += other.unbalanced
        for r, fam in other.families.items():
            self.families[r].merge(fam)
        if self.c3 is not None and other.c3 is not None:
            self.c3.merge(other.c3)
        if self.lemmas is not None and other.lemmas is not None:
            self.lemmas.merge(other.lemmas)
        self.seconds += other.seconds
        return self


def scan_codes(
    n: int,
    lo: int,
    hi: int,
    rs=(),
    *,
    index: bool = True,
    c3: bool = False,
    lemmas: bool = False,
) -> ScanResult:
    """Scan underlying-graph codes ``lo <= code < hi`` on ``n`` vertices."""
    _check_order(n)
    rs = tuple(sorted(rs))
    started = time.perf_counter()
    out = ScanResult(n, rs, (lo, hi), families={r: Family() for r in rs})
    if c3:
        out.c3 = Family()
    if lemmas:
        out.lemmas = LemmaStats()
    need_spectrum = index or c3 or lemmas
    complete_code = (1 << len(vertex_pairs(n))) - 1

    for code in range(lo, hi):
        lay = layout(n, code)
        k = len(lay.free_edges)
        signings = np.arange(1 << k, dtype=np.uint64)
        unbalanced = signings != 0
        out.classes += signings.size
        out.unbalanced += int(unbalanced.sum())

        cliques = sorted(cliques_from_bitsets(list(lay.adj)), key=len, reverse=True)
        by_size: dict[int, list] = {}
        for q in cliques:
            by_size.setdefault(len(q), []).append(q)

        values = None
        if need_spectrum:
            mats = kernels.signed_batch(
                lay.base_matrix(),
                [u for u, _ in lay.free_edges],
                [v for _, v in lay.free_edges],
                signings,
            )
            values, vectors = kernels.eigh_batch(mats, want_vectors=lemmas)
            lam1 = values[:, 0]

        for r in rs:
            masks = sorted({t for q in by_size.get(r + 1, ()) for t in lay.star_masks(q)})
            sel = unbalanced & kernels.even_on_all(signings, np.array(masks, dtype=np.uint64))
            fam = out.families[r]
            picked = signings[sel]
            fam.free += picked.size
            fam.edges.offer(code, picked, np.full(picked.size, lay.m))
            if index and picked.size:
                fam.value.offer(code, picked, lam1[sel])

        if c3:
            tri = sorted({t for q in by_size.get(3, ()) for t in lay.star_masks(q)})
            sel = unbalanced & kernels.even_on_all(signings, np.array(tri, dtype=np.uint64))
            picked = signings[sel]
            out.c3.free += picked.size
            out.c3.edges.offer(code, picked, np.full(picked.size, lay.m))
            if picked.size:
                radius = np.maximum(values[sel, 0], -values[sel, -1])
                out.c3.value.offer(code, picked, radius)

        if lemmas:
            st = out.lemmas
            st.checked += signings.size
            omega = len(cliques[0]) if cliques else 0
            if omega:
                st.record("clique_bound", n * (1 - 1 / omega) - lam1, code, signings)
            sizes = [len(q) for q in cliques]
            ptr = np.zeros(len(cliques) + 1, dtype=np.int64)
            star = []
            for i, q in enumerate(cliques):
                star += lay.star_masks(q)
                ptr[i + 1] = len(star)
            omega_b = kernels.max_balanced_clique(
                signings, np.array(sizes, dtype=np.int64), ptr, np.array(star, dtype=np.uint64)
            )
            if omega:
                st.record("balanced_clique_bound", n * (1 - 1 / omega_b) - lam1, code, signings)
            st.record("underlying_bound", lam1[0] - lam1, code, signings)
            st.record("order_bound", (n - 1) - lam1, code, signings)
            at_top = lam1 >= n - 1 - INDEX_TOL
            expected_top = (signings == 0) & (code == complete_code)
            st.max_index_classes += int(at_top.sum())
            st.flag("order_bound_equality", code, signings[at_top != expected_top])
            # zero entries of the leading eigenvector
            zeros = (np.abs(vectors[:, :, 0]) <= 1e-8).sum(axis=1)
            allowed = np.floor(n - lam1 + INDEX_TOL).astype(np.int64) - 1
            st.record("zero_entry_bound", (allowed - zeros).astype(float), code, signings)

    out.seconds = time.perf_counter() - started
    return out


def _scan_chunk(args):
    n, lo, hi, rs, flags, cache_dir = args
    path = None
    if cache_dir:
        tag = "".join(k[0] for k, v in sorted(flags.items()) if v)
        path = os.path.join(
            cache_dir, f"scan-n{n}-r{'_'.join(map(str, rs)) or 'none'}-{tag}-{lo}-{hi}.pkl"
        )
        if os.path.exists(path):
            with open(path, "rb") as fh:
                return pickle.load(fh)
    result = scan_codes(n, lo, hi, rs, **flags)
    if path:
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            pickle.dump(result, fh)
        os.replace(tmp, path)
    return result


def scan(
    n: int,
    rs=(),
    *,
    index: bool = True,
    c3: bool = False,
    lemmas: bool = False,
    jobs: int = 1,
    chunks: int | None = None,
    cache_dir: str | None = None,
) -> ScanResult:
    """Scan every underlying graph on ``n`` vertices, optionally across processes.

    Work is split into contiguous code ranges; partial results merge in any
    order. With ``cache_dir`` each finished range is stored and reused on the
    next run.
    """
    _check_order(n)
    total = 1 << len(vertex_pairs(n))
    chunks = chunks or max(1, min(total, 4 * jobs if jobs > 1 else (64 if cache_dir else 1)))
    bounds = [total * i // chunks for i in range(chunks + 1)]
    flags = {"index": index, "c3": c3, "lemmas": lemmas}
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
    tasks = [(n, bounds[i], bounds[i + 1], tuple(rs), flags, cache_dir) for i in range(chunks)]
    if jobs > 1:
        from multiprocessing import get_context

        with get_context("spawn").Pool(jobs) as pool:
            parts = pool.map(_scan_chunk, tasks)
    else:
        parts = [_scan_chunk(t) for t in tasks]
    result = parts[0]
    for part in parts[1:]:
        result.merge(part)
    return result


# -- reports ------------------------------------------------------------------


def _iso_key(g: SignedGraph):
    # integer char-poly coefficients recovered from the spectrum; exact after rounding at n <= 7
    a = g.sign_matrix()
    values = np.linalg.eigvalsh(a.astype(float)) if g.n else np.zeros(0)
    poly = tuple(int(c) for c in np.rint(np.poly(values)))
    degrees = tuple(sorted(np.count_nonzero(a, axis=1).tolist()))
    return g.e, degrees, poly


def dedupe_switching_isomorphic(graphs) -> list[SignedGraph]:
    """Keep the first graph of each switching-isomorphism class, in input order."""
    buckets: dict = {}
    reps = []
    for g in graphs:
        bucket = buckets.setdefault(_iso_key(g), [])
        if not any(are_switching_isomorphic(h, g) for h in bucket):
            bucket.append(g)
            reps.append(g)
    return reps


@dataclass
class ExtremalReport:
    n: int
    r: int | str
    objective: str
    best: int | float | None
    expected: int | float | None
    holds: bool
    maximizers: list[SignedGraph]
    labelled_maximizers: int
    counts: dict
    checks: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        from .sg1 import dumps

        return {
            "n": self.n,
            "r": self.r,
            "objective": self.objective,
            "best": self.best,
            "expected": self.expected,
            "holds": self.holds,
            "maximizers": [dumps(g) for g in self.maximizers],
            "maximizer_classes": len(self.maximizers),
            "labelled_maximizers": self.labelled_maximizers,
            "counts": dict(self.counts),
            "checks": dict(self.checks),
        }


def _check_nr(n: int, r: int) -> None:
    _check_order(n)
    if not 3 <= r <= n - 1:
        raise ValueError(f"need 3 <= r <= n-1, got n={n}, r={r}")


def _holder_graphs(n: int, holders) -> list[SignedGraph]:
    return [layout(n, code).graph(s) for code, s, _ in sorted(holders)]


def _counts(res: ScanResult, fam: Family) -> dict:
    return {"classes": res.classes, "unbalanced": res.unbalanced, "free": fam.free}


def edges_report(res: ScanResult, r: int) -> ExtremalReport:
    n = res.n
    fam = res.families[r]
    expected = n * (n - 1) // 2 - (n - r)
    best = None if fam.edges.best is None else int(fam.edges.best)
    reps = dedupe_switching_isomorphic(_holder_graphs(n, fam.edges.holders))
    gamma = gamma_construction(n, r)
    checks = {
        "contains_unbalanced_K_r": all(find_unbalanced_complete(g, r) is not None for g in reps),
        "gamma_among_maximizers": any(are_switching_isomorphic(g, gamma) for g in reps),
    }
    return ExtremalReport(
        n, r, "edges", best, expected, best == expected and checks["contains_unbalanced_K_r"],
        reps, len(fam.edges.holders), _counts(res, fam), checks,
    )


def index_report(res: ScanResult, r: int) -> ExtremalReport:
    from .spectra import index

    n = res.n
    fam = res.families[r]
    gamma = gamma_construction(n, r)
    expected = index(gamma)
    best = fam.value.best
    graphs = _holder_graphs(n, fam.value.holders)
    reps = dedupe_switching_isomorphic(graphs)
    iso = [are_switching_isomorphic(g, gamma) for g in reps]
    one_negative = [fewest_negative_edges(g)[0] == 1 for g in reps]
    checks = {
        "all_maximizers_switching_isomorphic_to_gamma": all(iso),
        "maximizers_have_one_negative_edge_form": all(one_negative),
        "abs_error": None if best is None else abs(best - expected),
    }
    if not all(iso):
        from .sg1 import dumps

        checks["counterexamples"] = [dumps(g) for g, ok in zip(reps, iso) if not ok]
    holds = best is not None and abs(best - expected) <= INDEX_TOL and all(iso) and all(one_negative)
    return ExtremalReport(
        n, r, "index", best, expected, holds, reps, len(graphs), _counts(res, fam), checks
    )


def c3_bounds(n: int) -> tuple[int, float]:
    return n * (n - 1) // 2 - (n - 2), (math.sqrt(n * n - 8) + n - 4) / 2


def c3_reports_from(res: ScanResult) -> tuple[ExtremalReport, ExtremalReport]:
    n = res.n
    fam = res.c3
    edge_bound, radius_bound = c3_bounds(n)
    counts = _counts(res, fam)
    vacuous = fam.free == 0
    note = {"vacuous": vacuous}
    e_best = None if fam.edges.best is None else int(fam.edges.best)
    e_reps = dedupe_switching_isomorphic(_holder_graphs(n, fam.edges.holders))
    edges = ExtremalReport(
        n, "C3", "edges", e_best, edge_bound, vacuous or e_best == edge_bound,
        e_reps, len(fam.edges.holders), counts, dict(note),
    )
    r_best = fam.value.best
    r_reps = dedupe_switching_isomorphic(_holder_graphs(n, fam.value.holders))
    radius = ExtremalReport(
        n, "C3", "spectral_radius", r_best, radius_bound,
        vacuous or abs(r_best - radius_bound) <= INDEX_TOL,
        r_reps, len(fam.value.holders), counts,
        dict(note, abs_error=None if r_best is None else abs(r_best - radius_bound)),
    )
    return edges, radius


def max_edges_report(n: int, r: int, **scan_kw) -> ExtremalReport:
    """Largest edge count over unbalanced classes with no unbalanced K_{r+1}."""
    _check_nr(n, r)
    return edges_report(scan(n, [r], index=False, **scan_kw), r)


def max_index_report(n: int, r: int, *, allow_n7: bool = False, **scan_kw) -> ExtremalReport:
    """Largest index over unbalanced classes with no unbalanced K_{r+1}."""
    _check_nr(n, r)
    _gate(n, allow_n7)
    return index_report(scan(n, [r], index=True, **scan_kw), r)


def c3_reports(n: int, *, allow_n7: bool = False, **scan_kw):
    """Edge and spectral-radius extremes over unbalanced classes with no negative triangle."""
    _check_order(n)
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    _gate(n, allow_n7)
    return c3_reports_from(scan(n, [], index=False, c3=True, **scan_kw))


def _gate(n: int, allow_n7: bool) -> None:
    if n >= 7 and not allow_n7:
        raise ValueError("spectral scans at n = 7 take hours; pass allow_n7=True (--allow-n7)")


# -- full verification ---------------------------------------------------------


def lemma_summary(res: ScanResult) -> dict:
    """Bound checks gathered during a scan with ``lemmas=True``."""
    st = res.lemmas
    violations = {
        name: [
            {"graph": _sg1(layout(res.n, code).graph(sig)), "slack": slack}
            for code, sig, slack in items
        ]
        for name, items in sorted(st.violations.items())
    }
    # only the all-positive complete graph may reach n - 1
    return {
        "n": res.n,
        "classes_checked": st.checked,
        "worst_slack": dict(sorted(st.worst_slack.items())),
        "violation_count": dict(sorted(st.violation_count.items())),
        "violations": violations,
        "classes_at_order_bound": st.max_index_classes,
        "passed": not st.violation_count and st.max_index_classes == 1,
    }


def _sg1(g: SignedGraph) -> str:
    from .sg1 import dumps

    return dumps(g)


def verify_all(
    n_max: int = 6,
    *,
    jobs: int = 1,
    allow_n7: bool = False,
    seed: int = 0,
    trials: int = 1000,
    cache_dir: str | None = None,
) -> dict:
    """Every enumeration report for ``3 <= n <= n_max`` plus the sweeps of
    :mod:`signedturan.suites`. Failures are recorded, never raised."""
    from . import suites

    if not 3 <= n_max <= MAX_ORDER:
        raise ValueError(f"need 3 <= n_max <= {MAX_ORDER}, got {n_max}")
    _gate(n_max, allow_n7)
    out = {"n_max": n_max, "edges": [], "index": [], "c3": [], "lemmas": []}
    for n in range(3, n_max + 1):
        rs = list(range(3, n))
        logger.info("scanning n=%d", n)
        res = scan(n, rs, index=True, c3=True, lemmas=True, jobs=jobs, cache_dir=cache_dir)
        for r in rs:
            out["edges"].append(edges_report(res, r).as_dict())
            out["index"].append(index_report(res, r).as_dict())
        out["c3"].extend(rep.as_dict() for rep in c3_reports_from(res))
        out["lemmas"].append(lemma_summary(res))
    logger.info("running closed-form and randomized suites")
    out["closed_form"] = suites.closed_form_suite(5, 30)
    out["radius_index"] = suites.radius_index_suite(seed=seed)
    out["nonneg_eigenvector"] = suites.nonneg_eigenvector_suite(trials, seed)
    out["perturbations"] = suites.perturbation_suite(trials, seed)
    out["spectral_identities"] = suites.spectral_identity_suite(seed=seed)
    checks = [rep["holds"] for key in ("edges", "index", "c3") for rep in out[key]]
    checks += [row["passed"] for row in out["lemmas"]]
    checks += [
        out[key]["passed"]
        for key in ("closed_form", "radius_index", "nonneg_eigenvector", "perturbations",
                    "spectral_identities")
    ]
    out["all_passed"] = all(checks)
    return out
