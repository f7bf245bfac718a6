from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from helpers import graphs_with_subset, random_graph, signed_graphs
from signedturan.constructions import complete, gamma_construction, unbalanced_complete
from signedturan.graph import adjacency_matrix, negate, new_graph, switch, underlying
from signedturan.spectra import (
    IntPolynomial,
    NonEquitableError,
    NoSignChangeError,
    NotSymmetricError,
    Partition,
    Spectrum,
    char_poly,
    eigenvalues,
    gamma_cubic,
    index,
    largest_real_root,
    leading_eigenvector,
    quotient_matrix,
    spectral_radius,
    spectrum,
)

TOL = 1e-9


def int_matrices(max_n=8, symmetric=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(0, max_n))
        flat = draw(st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n))
        m = np.array(flat, dtype=np.int64).reshape(n, n)
        return np.triu(m) + np.triu(m, 1).T if symmetric else m

    return build()


class TestSpectrum:
    def test_k3(self):
        assert np.allclose(spectrum(complete(3)).values, [2, -1, -1], atol=TOL)

    def test_k3_one_negative_edge(self):
        assert np.allclose(spectrum(unbalanced_complete(3)).values, [1, 1, -2], atol=TOL)
        assert spectral_radius(unbalanced_complete(3)) == pytest.approx(2, abs=TOL)

    @pytest.mark.parametrize("n", [4, 6, 9])
    def test_gamma_r3_index(self, n):
        assert index(gamma_construction(n, 3)) == pytest.approx(n - 2, abs=TOL)

    @given(signed_graphs(min_n=1))
    def test_matches_lapack(self, g):
        a = adjacency_matrix(g)
        assert np.allclose(spectrum(g).values, oracles.jacobi_free_eigenvalues(a), atol=TOL)

    @given(graphs_with_subset())
    def test_switching_invariant(self, case):
        g, u = case
        assert np.allclose(spectrum(g).values, spectrum(switch(g, u)).values, atol=TOL)

    @given(signed_graphs(min_n=1))
    def test_negation_reverses(self, g):
        assert np.allclose(spectrum(negate(g)).values, [-x for x in reversed(spectrum(g).values)], atol=TOL)

    @given(signed_graphs(min_n=1))
    def test_bounded_by_underlying(self, g):
        s = spectrum(g)
        assert s.index <= index(underlying(g)) + TOL
        assert s.spectral_radius <= index(underlying(g)) + TOL
        assert abs(sum(s.values)) < 1e-8
        assert sum(x * x for x in s.values) == pytest.approx(2 * g.e, abs=1e-8)

    def test_empty_graph(self):
        with pytest.raises(ValueError):
            index(complete(0))
        assert len(spectrum(complete(0))) == 0

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetricError):
            eigenvalues([[0, 1], [0, 0]])
        with pytest.raises(NotSymmetricError):
            eigenvalues([[0, 1, 2]])

    def test_spectrum_order_validated(self):
        with pytest.raises(ValueError):
            Spectrum((1.0, 2.0))
        assert Spectrum((2, -3)).spectral_radius == 3

    @given(signed_graphs(min_n=1))
    def test_leading_eigenvector(self, g):
        x = leading_eigenvector(g)
        a = adjacency_matrix(g).astype(float)
        assert np.linalg.norm(x) == pytest.approx(1.0)
        assert np.linalg.norm(a @ x - index(g) * x) < 1e-8


class TestCharPoly:
    def test_zero_2x2(self):
        assert char_poly(np.zeros((2, 2), dtype=int)).coeffs == (0, 0, 1)
        assert str(char_poly(np.zeros((2, 2), dtype=int))) == "x^2"

    def test_k3(self):
        # (x - 2)(x + 1)^2
        assert char_poly(adjacency_matrix(complete(3))).coeffs == (-2, -3, 0, 1)

    @given(int_matrices())
    def test_matches_exact_interpolation(self, m):
        assert list(char_poly(m).coeffs) == _strip(oracles.char_poly_interpolated(m.tolist()))

    @given(int_matrices(symmetric=True))
    def test_roots_are_eigenvalues(self, m):
        if m.shape[0] == 0:
            return
        roots = np.sort(char_poly(m).roots().real)[::-1]
        assert np.allclose(roots, oracles.jacobi_free_eigenvalues(m), atol=1e-5)

    def test_rejects_fractional(self):
        with pytest.raises(ValueError):
            char_poly([[0.5, 0], [0, 0]])


def _strip(cs):
    while cs and cs[-1] == 0:
        cs = cs[:-1]
    return cs


class TestIntPolynomial:
    def test_str(self):
        assert str(gamma_cubic(10, 4)) == "x^3 - 7x^2 - 11x + 23"
        assert str(IntPolynomial((0, -1))) == "-x"
        assert str(IntPolynomial(())) == "0"
        assert str(IntPolynomial((5,))) == "5"

    def test_arithmetic(self):
        p = IntPolynomial.from_descending([1, -1])  # x - 1
        q = IntPolynomial.from_descending([1, 1])
        assert (p * q).coeffs == (-1, 0, 1)
        assert (p + q).coeffs == (0, 2)
        assert (p - p).coeffs == ()
        assert p(Fraction(1, 2)) == Fraction(-1, 2)

    def test_non_integer(self):
        with pytest.raises(ValueError):
            IntPolynomial((0.5,))

    def test_gamma_cubic_range(self):
        with pytest.raises(ValueError):
            gamma_cubic(5, 5)


class TestLargestRealRoot:
    def test_examples(self):
        p = IntPolynomial.from_descending([1, 0, -2])
        assert largest_real_root(p, 0, 3) == pytest.approx(2**0.5, abs=1e-12)
        cubic = IntPolynomial.from_descending([1, -6, 11, -6])  # roots 1, 2, 3
        assert largest_real_root(cubic, 0, 10) == pytest.approx(3, abs=1e-12)
        assert largest_real_root(cubic, 0, Fraction(5, 2)) == pytest.approx(2, abs=1e-12)

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            largest_real_root(IntPolynomial.from_descending([1, 0, 1]), -5, 5)
        with pytest.raises(ValueError):
            largest_real_root(IntPolynomial.from_descending([1, 0]), 2, 1)

    @pytest.mark.parametrize("n,r", [(n, r) for n in range(5, 13) for r in range(3, n)])
    def test_gamma_cubic_root_is_index(self, n, r):
        root = largest_real_root(gamma_cubic(n, r), n - 2, n - 1)
        assert root == pytest.approx(index(gamma_construction(n, r)), abs=TOL)


class TestQuotient:
    def test_k4_two_blocks(self):
        q = quotient_matrix(adjacency_matrix(complete(4)), Partition(((0,), (1, 2, 3))))
        assert q.tolist() == [[0, 3], [1, 2]]

    def test_non_equitable(self):
        path = adjacency_matrix(gamma_construction(5, 3))
        with pytest.raises(NonEquitableError, match="blocks"):
            quotient_matrix(path, Partition(((0, 1), (2, 3, 4))))

    def test_partition_validation(self):
        with pytest.raises(ValueError):
            Partition(((0,), ()))
        with pytest.raises(ValueError):
            Partition(((0, 1), (1, 2)))
        with pytest.raises(ValueError):
            quotient_matrix(np.zeros((3, 3), dtype=int), Partition(((0,), (1,))))

    @pytest.mark.parametrize("n,r", [(7, 3), (8, 4), (10, 6)])
    def test_gamma_quotient_spectrum_is_sub_multiset(self, n, r):
        a = adjacency_matrix(gamma_construction(n, r))
        blocks = [(0,), (1,), tuple(range(2, r)), tuple(range(r, n))]
        p = Partition(tuple(b for b in blocks if b))
        q = quotient_matrix(a, p)
        chi = p.characteristic_matrix()
        assert np.array_equal(a @ chi, chi @ q)
        full = list(spectrum(gamma_construction(n, r)).values)
        for ev in np.linalg.eigvals(q.astype(float)).real:
            hit = int(np.argmin([abs(ev - f) for f in full]))
            assert abs(full[hit] - ev) < 1e-8
            full.pop(hit)
        # the quotient polynomial divides the full one
        assert np.allclose(
            np.polydiv(list(reversed(char_poly(a).coeffs)), list(reversed(char_poly(q).coeffs)))[1], 0
        )

    def test_random_graph_trivial_partition(self, rng):
        g = random_graph(rng, 6)
        a = adjacency_matrix(g)
        assert np.array_equal(quotient_matrix(a, Partition(tuple((v,) for v in range(6)))), a)


class TestSmallExamples:
    def test_complete_and_edgeless_index(self):
        for n in range(2, 8):
            assert index(complete(n)) == pytest.approx(n - 1, abs=TOL)
        assert index(unbalanced_complete(5)) < 4
        assert index(new_graph(4, [])) == 0.0

    def test_negated_k3(self):
        assert np.allclose(spectrum(negate(complete(3))).values, [1, 1, -2], atol=TOL)

    def test_char_poly_one_negative_triangle(self):
        assert str(char_poly(adjacency_matrix(unbalanced_complete(3)))) == "x^3 - 3x + 2"

    def test_double_root_on_grid(self):
        p = IntPolynomial.from_descending([1, 0, -3, 2])
        assert largest_real_root(p, 0, 3) == 1.0

    def test_r3_root_is_exact(self):
        assert largest_real_root(gamma_cubic(10, 3), 8, 9) == 8.0
        assert gamma_cubic(10, 4)(8) == -1
        assert gamma_cubic(10, 4)(Fraction(805, 100)) > 0

    def test_leading_eigenvector_k3(self):
        assert np.allclose(np.abs(leading_eigenvector(complete(3))), np.full(3, 3**-0.5))
        x = leading_eigenvector(unbalanced_complete(3))
        a = adjacency_matrix(unbalanced_complete(3)).astype(float)
        assert np.allclose(a @ x, x, atol=1e-8)

    def test_k4_one_block(self):
        assert quotient_matrix(adjacency_matrix(complete(4)), Partition(((0, 1, 2, 3),))).tolist() == [[3]]
