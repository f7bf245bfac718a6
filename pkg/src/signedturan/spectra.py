"""Adjacency spectra, exact characteristic polynomials and equitable quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import kernels
from .graph import SignedGraph, adjacency_matrix


class NotSymmetricError(ValueError):
    pass


class NonEquitableError(ValueError):
    pass


class NoSignChangeError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(x) for x in self.values)
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ValueError("spectrum values must be non-increasing")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    @property
    def index(self) -> float:
        return self.values[0]

    @property
    def spectral_radius(self) -> float:
        return max(self.values[0], -self.values[-1])


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {a.shape}")
    return a


def _check_symmetric(a: np.ndarray) -> None:
    if not np.array_equal(a, a.T):
        i, j = np.argwhere(a != a.T)[0]
        raise NotSymmetricError(f"matrix is not symmetric: entry ({i},{j}) != ({j},{i})")


def eigenvalues(m) -> Spectrum:
    """All eigenvalues of a symmetric matrix, largest first."""
    a = _as_square(m)
    _check_symmetric(a)
    if a.shape[0] == 0:
        return Spectrum(())
    values, _ = kernels.eigh_batch(a[None].astype(np.float64))
    return Spectrum(tuple(values[0]))


def spectrum(g: SignedGraph) -> Spectrum:
    return eigenvalues(adjacency_matrix(g))


def index(g: SignedGraph) -> float:
    """Largest adjacency eigenvalue."""
    if g.n < 1:
        raise ValueError("index is undefined for the empty vertex set")
    return spectrum(g).index


def spectral_radius(g: SignedGraph) -> float:
    return spectrum(g).spectral_radius


def eigenpairs(g: SignedGraph) -> tuple[np.ndarray, np.ndarray]:
    """``(values, vectors)``, values non-increasing, vectors as columns."""
    a = adjacency_matrix(g).astype(np.float64)
    values, vectors = kernels.eigh_batch(a[None], want_vectors=True)
    return values[0], vectors[0]


def leading_eigenvector(g: SignedGraph) -> np.ndarray:
    """A unit eigenvector for the index. Any vector of the eigenspace may come back when
    the index is repeated."""
    if g.n < 1:
        raise ValueError("leading eigenvector is undefined for the empty vertex set")
    _, vectors = eigenpairs(g)
    x = vectors[:, 0]
    return x / np.linalg.norm(x)


# -- integer polynomials ------------------------------------------------------


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients listed constant term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        if any(c != cc for c, cc in zip(cs, self.coeffs)):
            raise ValueError("coefficients must be integers")
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_descending(cls, coeffs) -> IntPolynomial:
        return cls(tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0 if isinstance(x, Rational) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        k = max(len(a), len(b))
        a, b = a + (0,) * (k - len(a)), b + (0,) * (k - len(b))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if not self.coeffs or not other.coeffs:
            return IntPolynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def roots(self) -> np.ndarray:
        """Complex roots via numpy; for cross-checks, not for exact work."""
        if self.degree < 1:
            return np.array([])
        return np.roots([float(c) for c in reversed(self.coeffs)])

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = power if mag == 1 and k else f"{mag}{power}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def char_poly(m) -> IntPolynomial:
    """det(xI - M) by the Faddeev-LeVerrier recurrence in exact integers."""
    a = _as_square(m)
    if not np.all(np.equal(np.mod(a, 1), 0)):
        raise ValueError("char_poly needs an integer matrix")
    n = a.shape[0]
    a = np.array([[int(x) for x in row] for row in a], dtype=object).reshape(n, n)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ident = np.eye(n, dtype=int).astype(object)
    mk = np.zeros((n, n), dtype=int).astype(object)
    for k in range(1, n + 1):
        mk = a.dot(mk) + coeffs[n - k + 1] * ident
        trace = int(np.trace(a.dot(mk)))
        q, rem = divmod(-trace, k)
        if rem:
            raise ArithmeticError(f"non-integral Faddeev-LeVerrier step {k}")
        coeffs[n - k] = q
    return IntPolynomial(tuple(coeffs))


# -- equitable partitions -----------------------------------------------------


@dataclass(frozen=True)
class Partition:
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(v) for v in b) for b in self.blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition has an empty block")
        flat = [v for b in blocks for v in b]
        if len(flat) != len(set(flat)):
            raise ValueError("partition blocks overlap")
        object.__setattr__(self, "blocks", blocks)

    @property
    def order(self) -> int:
        return sum(len(b) for b in self.blocks)

    def check_covers(self, n: int) -> None:
        if sorted(v for b in self.blocks for v in b) != list(range(n)):
            raise ValueError(f"partition does not cover 0..{n - 1} exactly")

    def characteristic_matrix(self) -> np.ndarray:
        chi = np.zeros((self.order, len(self.blocks)), dtype=np.int64)
        for j, b in enumerate(self.blocks):
            chi[list(b), j] = 1
        return chi


def quotient_matrix(m, p: Partition) -> np.ndarray:
    """Block row-sum matrix of ``m`` for an equitable partition ``p``.

    Equitability is verified; the first block pair with unequal row sums is
    reported.
    """
    a = _as_square(m)
    p.check_covers(a.shape[0])
    k = len(p.blocks)
    q = np.zeros((k, k), dtype=a.dtype)
    for i, bi in enumerate(p.blocks):
        for j, bj in enumerate(p.blocks):
            sums = a[np.ix_(bi, bj)].sum(axis=1)
            if np.any(sums != sums[0]):
                bad = int(np.flatnonzero(sums != sums[0])[0])
                raise NonEquitableError(
                    f"blocks ({i}, {j}) not equitable: row {bi[0]} sums to {sums[0]}, "
                    f"row {bi[bad]} sums to {sums[bad]}"
                )
            q[i, j] = sums[0]
    return q


# -- the index polynomial of Gamma_{1,r-2} ------------------------------------


def gamma_cubic(n: int, r: int) -> IntPolynomial:
    """x^3 + (3-n)x^2 + (3-n-r)x + (n+4)r - (r^2+n+7); its largest root is the
    index of the one-negative-edge extremal graph."""
    if not 3 <= r <= n - 1:
        raise ValueError(f"need 3 <= r <= n-1, got n={n}, r={r}")
    return IntPolynomial(((n + 4) * r - (r * r + n + 7), 3 - n - r, 3 - n, 1))


def largest_real_root(p: IntPolynomial, lo, hi, *, step=Fraction(1, 1000), tol=1e-12) -> float:
    """Largest root of ``p`` in ``[lo, hi]``.

    Walks a grid of spacing ``step`` down from ``hi`` in exact rational
    arithmetic, stops at the first exact zero or sign change, then bisects.
    A root of even multiplicity is only found if it sits on a grid point.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    step = Fraction(step)
    count = int((hi - lo) / step)
    right = hi
    f_right = p(right)
    if f_right == 0:
        return float(right)
    for i in range(count, -1, -1):
        left = lo + i * step
        if left >= right:
            continue
        f_left = p(left)
        if f_left == 0:
            return float(left)
        if (f_left < 0) != (f_right < 0):
            break
        right, f_right = left, f_left
    else:
        raise NoSignChangeError(f"no sign change of {p} in [{float(lo)}, {float(hi)}]")
    neg_left = f_left < 0
    while right - left > tol / 4:
        mid = (left + right) / 2
        f_mid = p(mid)
        if f_mid == 0:
            return float(mid)
        if (f_mid < 0) == neg_left:
            left = mid
        else:
            right = mid
    return float((left + right) / 2)
