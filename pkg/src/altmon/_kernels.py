"""Compiled union-find kernels for congruence generation.

Every partition is stored as a ``roots`` array mapping each element index to
the least index of its block; union by least root keeps that invariant.
"""
import numpy as np
from numba import njit

_M1 = np.uint64(1099511628211)
_M2 = np.uint64(6364136223846793005)
_B1 = np.uint64(14695981039346656037)
_B2 = np.uint64(1442695040888963407)


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _saturate(parent, R, L, qa, qb, tail):
    """Process queued pairs until the relation is a congruence."""
    G = R.shape[1]
    head = 0
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        ra = _find(parent, a)
        rb = _find(parent, b)
        if ra == rb:
            continue
        if ra < rb:
            parent[rb] = ra
        else:
            parent[ra] = rb
        for j in range(G):
            qa[tail] = R[a, j]
            qb[tail] = R[b, j]
            tail += 1
            qa[tail] = L[a, j]
            qb[tail] = L[b, j]
            tail += 1


@njit(cache=True)
def _roots(parent, out):
    for x in range(parent.shape[0]):
        out[x] = _find(parent, x)


@njit(cache=True)
def congruence_from_pairs(R, L, pa, pb):
    """Least congruence containing the pairs ``(pa[i], pb[i])``."""
    N = R.shape[0]
    G = R.shape[1]
    cap = pa.shape[0] + 2 * G * N + 1
    qa = np.empty(cap, dtype=np.int64)
    qb = np.empty(cap, dtype=np.int64)
    for i in range(pa.shape[0]):
        qa[i] = pa[i]
        qb[i] = pb[i]
    parent = np.arange(N)
    _saturate(parent, R, L, qa, qb, pa.shape[0])
    out = np.empty(N, dtype=np.int64)
    _roots(parent, out)
    return out


@njit(cache=True)
def principal_fingerprints(R, L, seeds_a, seeds_b):
    """Two independent 64-bit fingerprints of each principal congruence."""
    N = R.shape[0]
    G = R.shape[1]
    cap = 1 + 2 * G * N + 1
    qa = np.empty(cap, dtype=np.int64)
    qb = np.empty(cap, dtype=np.int64)
    parent = np.empty(N, dtype=np.int64)
    m = seeds_a.shape[0]
    h1 = np.empty(m, dtype=np.uint64)
    h2 = np.empty(m, dtype=np.uint64)
    for s in range(m):
        for x in range(N):
            parent[x] = x
        qa[0] = seeds_a[s]
        qb[0] = seeds_b[s]
        _saturate(parent, R, L, qa, qb, 1)
        a = _B1
        b = _B2
        for x in range(N):
            r = np.uint64(_find(parent, x))
            a = (a ^ r) * _M1
            b = (b + r + np.uint64(1)) * _M2
            b = b ^ (b >> np.uint64(29))
        h1[s] = a
        h2[s] = b
    return h1, h2


@njit(cache=True)
def join_roots(R, L, roots_a, roots_b):
    """Join of two congruences given by their root arrays."""
    N = R.shape[0]
    pa = np.empty(2 * N, dtype=np.int64)
    pb = np.empty(2 * N, dtype=np.int64)
    for x in range(N):
        pa[x] = x
        pb[x] = roots_a[x]
        pa[N + x] = x
        pb[N + x] = roots_b[x]
    return congruence_from_pairs(R, L, pa, pb)
