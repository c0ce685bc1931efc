"""Bitmask kernels for nail-subset enumeration.

Each kernel is written once in numba's nopython subset. With numba available
and ``SHALLOWMINOR_NO_JIT`` unset, the compiled version is used; otherwise
the same function runs as ordinary Python over numpy arrays.

Graphs enter as ``adj``: an int64 array where bit ``j`` of ``adj[i]`` is set
iff vertices ``i`` and ``j`` are adjacent. Vertex indices follow the sorted
vertex order, so comparing index sets lexicographically compares id sets.
"""

from __future__ import annotations

import os

import numpy as np

MAX_KERNEL_VERTICES = 62

_disabled = os.environ.get("SHALLOWMINOR_NO_JIT", "").lower() in ("1", "true", "yes")
try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and not _disabled


def _jit(func):
    if USE_NUMBA:
        return numba.njit(cache=True)(func)
    return func


@_jit
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@_jit
def _lex_less(a, b):
    # Sorted-list lexicographic order on bitmasks; a proper prefix is smaller.
    if a == b:
        return False
    diff = a ^ b
    d = 0
    while not (diff >> d) & 1:
        d += 1
    if (a >> d) & 1:
        return (b >> (d + 1)) != 0
    return (a >> (d + 1)) == 0


@_jit
def matched_edges(adj, nails, left_allowed, stm, owner, ostamp, vstamp, plist, pcnt, stack_u, stack_k, stack_p, stamps):
    """Minor edges realisable on nail mask ``nails`` at depth one.

    Counts direct edges inside the nail set when ``stm`` is set, plus a
    maximum matching of allowed non-nails to nail pairs they are adjacent to
    (Kuhn's augmenting paths, left vertices in index order). ``stamps`` holds
    the running [subset, visit] counters so scratch arrays are never cleared.
    """
    n = adj.shape[0]
    stamps[0] += 1
    sstamp = stamps[0]
    e = 0
    if stm:
        for x in range(n):
            if (nails >> x) & 1:
                e += _popcount(adj[x] & nails)
        e //= 2
    for u in range(n):
        pcnt[u] = 0
        if (nails >> u) & 1:
            continue
        if not (left_allowed >> u) & 1:
            continue
        nb = adj[u] & nails
        if nb & (nb - 1) == 0:
            continue
        for x in range(n):
            if (nb >> x) & 1:
                for y in range(x + 1, n):
                    if (nb >> y) & 1:
                        if stm:
                            if (adj[x] >> y) & 1:
                                continue
                        plist[u, pcnt[u]] = x * n + y
                        pcnt[u] += 1
    for u in range(n):
        if pcnt[u] == 0:
            continue
        stamps[1] += 1
        vs = stamps[1]
        depth = 0
        stack_u[0] = u
        stack_k[0] = 0
        found = False
        while depth >= 0:
            w = stack_u[depth]
            k = stack_k[depth]
            if k >= pcnt[w]:
                depth -= 1
                continue
            stack_k[depth] = k + 1
            p = plist[w, k]
            if vstamp[p] == vs:
                continue
            vstamp[p] = vs
            stack_p[depth] = p
            if ostamp[p] != sstamp:
                found = True
                break
            depth += 1
            stack_u[depth] = owner[p]
            stack_k[depth] = 0
        if found:
            for d in range(depth + 1):
                p = stack_p[d]
                owner[p] = stack_u[d]
                ostamp[p] = sstamp
            e += 1
    return e


@_jit
def subset_scan(adj, cand, left_allowed, stm, lo, hi):
    """Scan nail subsets ``lo <= s < hi`` over the candidate index list.

    Bit ``b`` of ``s`` selects vertex ``cand[b]``. Returns
    ``(best_mask, best_edges, best_size)`` maximising edges/size with ties
    going to the lexicographically smallest nail set; ``best_edges`` is -1
    when the range holds no nonempty subset.
    """
    n = adj.shape[0]
    c = cand.shape[0]
    owner = np.zeros(n * n, np.int64)
    ostamp = np.zeros(n * n, np.int64)
    vstamp = np.zeros(n * n, np.int64)
    plist = np.zeros((n, max(1, n * (n - 1) // 2)), np.int64)
    pcnt = np.zeros(n, np.int64)
    stack_u = np.zeros(n + 1, np.int64)
    stack_k = np.zeros(n + 1, np.int64)
    stack_p = np.zeros(n + 1, np.int64)
    stamps = np.zeros(2, np.int64)
    best_mask = 0
    best_e = -1
    best_sz = 1
    for s in range(lo, hi):
        if s == 0:
            continue
        nails = 0
        sz = 0
        for b in range(c):
            if (s >> b) & 1:
                nails |= 1 << cand[b]
                sz += 1
        e = matched_edges(adj, nails, left_allowed, stm, owner, ostamp, vstamp, plist, pcnt, stack_u, stack_k, stack_p, stamps)
        lhs = e * best_sz
        rhs = best_e * sz
        if best_e < 0 or lhs > rhs or (lhs == rhs and _lex_less(nails, best_mask)):
            best_mask = nails
            best_e = e
            best_sz = sz
    return best_mask, best_e, best_sz


def scratch(n: int):
    """Scratch buffers for calling :func:`matched_edges` directly."""
    return (
        np.zeros(n * n, np.int64),
        np.zeros(n * n, np.int64),
        np.zeros(n * n, np.int64),
        np.zeros((n, max(1, n * (n - 1) // 2)), np.int64),
        np.zeros(n, np.int64),
        np.zeros(n + 1, np.int64),
        np.zeros(n + 1, np.int64),
        np.zeros(n + 1, np.int64),
        np.zeros(2, np.int64),
    )
