import numpy as np
import pytest
from hypothesis import given, settings

from helpers import signed_graphs
from signedturan.constructions import complete, gamma_construction
from signedturan.graph import adjacency_matrix, new_graph, switch
from signedturan.perturb import (
    Kind,
    Perturbation,
    PerturbationError,
    apply,
    equality_condition,
    equality_diagnosis,
    nonneg_switch,
    nonneg_switch_set,
    precondition_holds,
    rayleigh_increment,
    zero_entry_bound,
)
from signedturan.suites import _candidates, random_perturbation

TOL = 1e-9


def lam(g):
    # LAPACK, independent of the package's Jacobi kernel
    return float(np.linalg.eigvalsh(adjacency_matrix(g).astype(float))[-1])


def nonneg_vector(g):
    h, x = nonneg_switch(g)
    return h, x


class TestApply:
    def test_add_positive(self):
        g = new_graph(3, [(0, 1, 1)])
        assert apply(g, Perturbation(Kind.ADD_POSITIVE, edges=((2, 1),))).sign(1, 2) == 1

    def test_remove_and_flip_negative(self):
        g = new_graph(3, [(0, 1, -1), (1, 2, 1)])
        assert apply(g, Perturbation("remove-negative", edges=((0, 1),))).e == 1
        assert apply(g, Perturbation("flip-negative", edges=((0, 1),))).sign(0, 1) == 1

    def test_rotate_and_swap(self):
        g = new_graph(3, [(0, 1, 1), (0, 2, -1)])
        h = apply(g, Perturbation("swap-signs", triple=(0, 1, 2)))
        assert h.sign(0, 1) == -1 and h.sign(0, 2) == 1
        g = new_graph(3, [(0, 1, 1)])
        h = apply(g, Perturbation("rotate-positive", triple=(0, 1, 2)))
        assert h.edges == ((0, 2, 1),)

    @pytest.mark.parametrize(
        "g,p",
        [
            (new_graph(3, [(0, 1, 1)]), Perturbation("add-positive", edges=((0, 1),))),
            (new_graph(3, [(0, 1, 1)]), Perturbation("remove-negative", edges=((0, 1),))),
            (new_graph(3, []), Perturbation("flip-negative", edges=((0, 1),))),
            (new_graph(3, [(0, 1, -1)]), Perturbation("rotate-positive", triple=(0, 1, 2))),
            (new_graph(3, [(0, 1, 1), (0, 2, 1)]), Perturbation("rotate-positive", triple=(0, 1, 2))),
            (new_graph(3, [(0, 1, 1), (0, 2, 1)]), Perturbation("swap-signs", triple=(0, 1, 2))),
            (new_graph(3, []), Perturbation("add-positive", edges=((0, 5),))),
        ],
    )
    def test_preconditions(self, g, p):
        with pytest.raises(PerturbationError):
            apply(g, p)

    def test_malformed_payloads(self):
        with pytest.raises(PerturbationError):
            Perturbation("add-positive")
        with pytest.raises(PerturbationError):
            Perturbation("add-positive", edges=((0, 1), (1, 0)))
        with pytest.raises(PerturbationError):
            Perturbation("swap-signs", triple=(0, 0, 1))
        with pytest.raises(PerturbationError):
            Perturbation("swap-signs", edges=((0, 1),), triple=(0, 1, 2))
        with pytest.raises(ValueError):
            Perturbation("no-such-kind", edges=((0, 1),))

    def test_loop_edge(self):
        with pytest.raises(PerturbationError):
            apply(new_graph(3, []), Perturbation("add-positive", edges=((1, 1),)))


class TestNonnegSwitch:
    @given(signed_graphs(min_n=1))
    def test_nonnegative_eigenvector(self, g):
        h, x = nonneg_switch(g)
        a = adjacency_matrix(h).astype(float)
        assert x.min() >= -1e-10
        assert np.linalg.norm(x) == pytest.approx(1.0)
        assert np.linalg.norm(a @ x - lam(g) * x) < 1e-8
        assert lam(h) == pytest.approx(lam(g), abs=TOL)

    def test_switch_set_points_at_negative_entries(self):
        g = complete(4, -1)
        u_set, x = nonneg_switch_set(g)
        assert u_set == frozenset(v for v in range(4) if x[v] < 0)
        assert switch(g, u_set) == nonneg_switch(g)[0]

    def test_empty(self):
        assert nonneg_switch_set(new_graph(0, []))[0] == frozenset()


def _trials(kind, count, seed):
    rng = np.random.default_rng(seed)
    done = 0
    while done < count:
        n = int(rng.integers(3, 9))
        g0 = new_graph(
            n,
            [(u, v, -1 if rng.random() < 0.4 else 1) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6],
        )
        g, x = nonneg_vector(g0)
        if not _candidates(g, kind):
            continue
        p = random_perturbation(rng, g, x, kind)
        done += 1
        yield g, x, p


@pytest.mark.parametrize("kind", list(Kind))
def test_monotone_and_rayleigh(kind):
    held = 0
    for g, x, p in _trials(kind, 300, seed=list(Kind).index(kind)):
        h = apply(g, p)
        a_new = adjacency_matrix(h).astype(float)
        a_old = adjacency_matrix(g).astype(float)
        # Rayleigh quotient increment equals the closed form
        assert x @ a_new @ x - x @ a_old @ x == pytest.approx(rayleigh_increment(x, p), abs=1e-9)
        if precondition_holds(x, p):
            held += 1
            assert lam(h) >= lam(g) - TOL
            assert lam(h) >= x @ a_new @ x - TOL
    assert held > 0


@pytest.mark.parametrize("kind", list(Kind))
def test_equality_implies_condition(kind):
    for g, x, p in _trials(kind, 300, seed=7 + len(kind.value)):
        d = equality_diagnosis(g, p, x)
        if d.precondition and not d.degenerate and d.index_unchanged:
            assert d.condition_met, d.as_dict()


class TestEqualityExamples:
    def test_isolated_component(self):
        # x vanishes on an isolated pair; adding a positive edge there changes nothing
        g = new_graph(5, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
        g, x = nonneg_vector(g)
        d = equality_diagnosis(g, Perturbation("add-positive", edges=((3, 4),)), x)
        assert d.index_unchanged and d.condition_met and d.agree

    def test_strict_increase(self):
        g, x = nonneg_vector(gamma_construction(6, 3))
        d = equality_diagnosis(g, Perturbation("flip-negative", edges=tuple(g.negative_edges())), x)
        assert d.delta > 1e-6 and not d.condition_met and d.agree

    def test_converse_fails(self):
        # x is zero on the C4 but joining its diagonals lifts that component above the K4 part
        k4_minus = [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)]
        c4 = [(4, 5, 1), (5, 6, 1), (6, 7, 1), (4, 7, 1)]
        g, x = nonneg_vector(new_graph(8, k4_minus + c4))
        p = Perturbation("add-positive", edges=((4, 6), (5, 7)))
        d = equality_diagnosis(g, p, x)
        assert not d.degenerate and d.precondition
        assert d.condition_met
        assert d.index_before == pytest.approx((1 + 17**0.5) / 2)
        assert d.index_after == pytest.approx(3.0)
        assert d.index_unchanged is False

    def test_triple_condition(self):
        x = np.array([0.0, 0.5, 0.5])
        p = Perturbation("rotate-positive", triple=(0, 1, 2))
        assert equality_condition(x, p) and precondition_holds(x, p)
        assert not precondition_holds(np.array([0.1, 0.6, 0.5]), p)
        assert not precondition_holds(np.array([-0.1, 0.5, 0.5]), p)


class TestZeroEntryBound:
    def test_complete(self):
        holds, zeros, allowed = zero_entry_bound(complete(6))
        assert holds and zeros == 0

    @given(signed_graphs(min_n=2))
    @settings(max_examples=80)
    def test_random(self, g):
        holds, zeros, allowed = zero_entry_bound(g)
        assert holds, (zeros, allowed)


class TestSmallExamples:
    def test_nonneg_switch_complete(self):
        h, x = nonneg_switch(complete(5))
        assert h == complete(5) and np.allclose(x, np.full(5, 5**-0.5))

    def test_nonneg_switch_negative_triangle(self):
        h, x = nonneg_switch(complete(3, -1))
        assert x.min() >= -1e-10 and lam(h) == pytest.approx(1.0)

    def test_add_edge_to_k4_minus(self):
        g = new_graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (1, 3, 1)])
        assert lam(g) == pytest.approx((1 + 17**0.5) / 2)
        g, x = nonneg_vector(g)
        d = equality_diagnosis(g, Perturbation("add-positive", edges=((2, 3),)), x)
        assert d.index_after == pytest.approx(3.0) and d.index_unchanged is False
        assert not d.condition_met and x.min() > 0
