"""Hot numeric kernels used by the spectra module and the switching-class scan.

Every kernel exists twice: an explicit-loop body that numba compiles, and a
vectorised numpy body. The public names dispatch on
:data:`signedturan._accel.USE_NUMBA`; both variants stay importable so the
test suite and ``benchmarks/bench_kernels.py`` can compare them directly.

Signing codes are unsigned integers whose bit ``b`` marks the ``b``-th
switchable (non-forest) edge as negative. A "mask" is a set of such bits.
"""

from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


# -- symmetric eigensolver ----------------------------------------------------


@njit
def _jacobi_inplace(a, v, want_vectors, tol, max_sweeps):
    # cyclic Jacobi; on exit diag(a) holds the eigenvalues, columns of v the vectors
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += a[p, q] * a[p, q]
        if np.sqrt(2.0 * off) < tol:
            return
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - s * vkq
                        v[k, q] = s * vkp + c * vkq


@njit
def _eigh_batch_loop(mats, want_vectors):
    count = mats.shape[0]
    n = mats.shape[1]
    values = np.empty((count, n))
    vectors = np.zeros((count, n, n))
    for b in range(count):
        a = mats[b].copy()
        v = np.eye(n)
        _jacobi_inplace(a, v, want_vectors, JACOBI_TOL, JACOBI_MAX_SWEEPS)
        d = np.empty(n)
        for i in range(n):
            d[i] = a[i, i]
        order = np.argsort(-d, kind="mergesort")
        for i in range(n):
            values[b, i] = d[order[i]]
            if want_vectors:
                for k in range(n):
                    vectors[b, k, i] = v[k, order[i]]
    return values, vectors


def _eigh_batch_numpy(mats, want_vectors):
    mats = np.asarray(mats, dtype=np.float64)
    if mats.shape[1] == 0:
        return np.empty(mats.shape[:2]), np.empty(mats.shape)
    if want_vectors:
        w, v = np.linalg.eigh(mats)
        return w[:, ::-1].copy(), v[:, :, ::-1].copy()
    w = np.linalg.eigvalsh(mats)
    return w[:, ::-1].copy(), np.zeros(mats.shape)


def eigh_batch(mats, want_vectors=False):
    """Eigen-decompose a stack of real symmetric matrices.

    Returns ``(values, vectors)`` with values non-increasing along the last
    axis and ``vectors[b][:, i]`` the unit eigenvector for ``values[b, i]``.
    ``vectors`` is all zeros when ``want_vectors`` is false.
    """
    mats = np.ascontiguousarray(mats, dtype=np.float64)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError(f"expected a (count, n, n) stack, got shape {mats.shape}")
    if USE_NUMBA:
        return _eigh_batch_loop(mats, want_vectors)
    return _eigh_batch_numpy(mats, want_vectors)


# -- signing evaluation -------------------------------------------------------


@njit
def _popcount(x):
    one = np.uint64(1)
    x = np.uint64(x)
    c = 0
    while x:
        x &= x - one
        c += 1
    return c


@njit
def _even_on_all_loop(codes, masks):
    out = np.ones(codes.shape[0], dtype=np.bool_)
    for i in range(codes.shape[0]):
        c = codes[i]
        for t in range(masks.shape[0]):
            if _popcount(c & masks[t]) & 1:
                out[i] = False
                break
    return out


def _even_on_all_numpy(codes, masks):
    codes = np.asarray(codes, dtype=np.uint64)
    masks = np.asarray(masks, dtype=np.uint64)
    if masks.size == 0:
        return np.ones(codes.shape[0], dtype=bool)
    odd = np.bitwise_count(codes[:, None] & masks[None, :]) & 1
    return ~odd.any(axis=1)


def even_on_all(codes, masks):
    """For each signing code: does it meet every mask in an even number of bits?

    With one mask per triangle this is "no negative triangle among these".
    """
    codes = np.ascontiguousarray(codes, dtype=np.uint64)
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    if USE_NUMBA:
        return _even_on_all_loop(codes, masks)
    return _even_on_all_numpy(codes, masks)


@njit
def _max_balanced_clique_loop(codes, sizes, ptr, masks):
    # cliques arrive sorted by size, largest first
    out = np.zeros(codes.shape[0], dtype=np.int64)
    for i in range(codes.shape[0]):
        c = codes[i]
        for q in range(sizes.shape[0]):
            ok = True
            for t in range(ptr[q], ptr[q + 1]):
                if _popcount(c & masks[t]) & 1:
                    ok = False
                    break
            if ok:
                out[i] = sizes[q]
                break
    return out


def _max_balanced_clique_numpy(codes, sizes, ptr, masks):
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.zeros(codes.shape[0], dtype=np.int64)
    if masks.size:
        odd = (np.bitwise_count(codes[:, None] & masks[None, :]) & 1).astype(bool)
    else:
        odd = np.zeros((codes.shape[0], 0), dtype=bool)
    for q in range(sizes.shape[0]):
        lo, hi = ptr[q], ptr[q + 1]
        balanced = ~odd[:, lo:hi].any(axis=1)
        np.maximum(out, np.where(balanced, sizes[q], 0), out=out)
    return out


def max_balanced_clique(codes, sizes, ptr, masks):
    """Largest balanced clique size per signing code.

    Clique ``q`` is balanced under a code iff the code is even on every mask in
    ``masks[ptr[q]:ptr[q+1]]`` (its star triangles). ``sizes`` must be sorted
    non-increasing for the loop kernel's early exit.
    """
    codes = np.ascontiguousarray(codes, dtype=np.uint64)
    sizes = np.ascontiguousarray(sizes, dtype=np.int64)
    ptr = np.ascontiguousarray(ptr, dtype=np.int64)
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    if USE_NUMBA:
        return _max_balanced_clique_loop(codes, sizes, ptr, masks)
    return _max_balanced_clique_numpy(codes, sizes, ptr, masks)


@njit
def _signed_batch_loop(base, us, vs, codes):
    count = codes.shape[0]
    n = base.shape[0]
    out = np.empty((count, n, n))
    for i in range(count):
        out[i] = base
        c = codes[i]
        for b in range(us.shape[0]):
            if (c >> np.uint64(b)) & np.uint64(1):
                out[i, us[b], vs[b]] = -1.0
                out[i, vs[b], us[b]] = -1.0
    return out


def _signed_batch_numpy(base, us, vs, codes):
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.broadcast_to(base, (codes.shape[0],) + base.shape).copy()
    if us.size:
        bits = (codes[:, None] >> np.arange(us.size, dtype=np.uint64)[None, :]) & np.uint64(1)
        sign = 1.0 - 2.0 * bits.astype(np.float64)
        out[:, us, vs] = sign
        out[:, vs, us] = sign
    return out


def signed_batch(base, us, vs, codes):
    """Stack of signed adjacency matrices, one per signing code.

    ``base`` is the all-positive adjacency of the underlying graph; bit ``b``
    of a code makes edge ``(us[b], vs[b])`` negative.
    """
    base = np.ascontiguousarray(base, dtype=np.float64)
    us = np.ascontiguousarray(us, dtype=np.int64)
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    codes = np.ascontiguousarray(codes, dtype=np.uint64)
    if USE_NUMBA:
        return _signed_batch_loop(base, us, vs, codes)
    return _signed_batch_numpy(base, us, vs, codes)
