"""Numba-compiled inner loops.

Every kernel here has a vectorised twin in ``_numpy`` with the same
signature and the same (deterministic) output.
"""
import numpy as np
from numba import njit

_ONE = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> _ONE) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True)
def _weight(words):
    w = 0
    for i in range(words.shape[0]):
        w += _popcount(words[i])
    return w


@njit(cache=True)
def _lex_less(a, b):
    # equal-weight supports: the one owning the lowest differing bit is lex-smaller
    for i in range(a.shape[0]):
        x = a[i] ^ b[i]
        if x != 0:
            low = x & (~x + _ONE)
            return (a[i] & low) != 0
    return False


@njit(cache=True)
def gf2_rref(W, ncols):
    """Reduce packed rows ``W`` in place to reduced row echelon form.

    Pivots are taken at the lowest available column. Returns the pivot columns.
    """
    m, nw = W.shape
    pivots = np.empty(min(m, ncols), np.int64)
    rank = 0
    for c in range(ncols):
        if rank == m:
            break
        word = c >> 6
        bit = _ONE << np.uint64(c & 63)
        piv = -1
        for r in range(rank, m):
            if W[r, word] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(nw):
                t = W[piv, j]
                W[piv, j] = W[rank, j]
                W[rank, j] = t
        for r in range(m):
            if r != rank and (W[r, word] & bit):
                for j in range(word, nw):
                    W[r, j] ^= W[rank, j]
        pivots[rank] = c
        rank += 1
    return pivots[:rank].copy()


@njit(cache=True)
def bfs(indptr, indices, source):
    """Breadth-first search; returns ``(dist, parent, parent_slot)``, -1 when unset."""
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    pslot = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    head = 0
    tail = 1
    queue[0] = source
    dist[source] = 0
    while head < tail:
        u = queue[head]
        head += 1
        for s in range(indptr[u], indptr[u + 1]):
            v = indices[s]
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                parent[v] = u
                pslot[v] = s
                queue[tail] = v
                tail += 1
    return dist, parent, pslot


@njit(cache=True)
def fiber_distances(indptr, indices, nbase, nsheets):
    """Shortest distance from ``(v, 0)`` to ``(v, s)`` minimised over base ``v``.

    Cover node ``(v, s)`` has index ``v * nsheets + s``. Returns ``(best, argbest)``
    indexed by sheet; -1 where no such path exists.
    """
    n = indptr.shape[0] - 1
    best = np.full(nsheets, -1, np.int64)
    arg = np.full(nsheets, -1, np.int64)
    dist = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    for v in range(nbase):
        src = v * nsheets
        head = 0
        tail = 1
        queue[0] = src
        dist[src] = 0
        while head < tail:
            u = queue[head]
            head += 1
            for s in range(indptr[u], indptr[u + 1]):
                x = indices[s]
                if dist[x] < 0:
                    dist[x] = dist[u] + 1
                    queue[tail] = x
                    tail += 1
        for s in range(1, nsheets):
            d = dist[src + s]
            if d >= 0 and (best[s] < 0 or d < best[s]):
                best[s] = d
                arg[s] = v
        for i in range(tail):
            dist[queue[i]] = -1
    return best, arg


@njit(cache=True)
def coset_min(z0, basis):
    """Minimum weight over ``z0 + span(basis)`` by Gray-code enumeration.

    Ties are broken towards the lexicographically least support.
    """
    d, nw = basis.shape
    cur = z0.copy()
    best = z0.copy()
    bw = _weight(cur)
    total = np.int64(1) << np.int64(d)
    for g in range(1, total):
        j = 0
        while not (g >> j) & 1:
            j += 1
        for i in range(nw):
            cur[i] ^= basis[j, i]
        w = _weight(cur)
        if w < bw or (w == bw and _lex_less(cur, best)):
            bw = w
            for i in range(nw):
                best[i] = cur[i]
    return bw, best


@njit(cache=True)
def _find(parent, parity, x):
    p = 0
    r = x
    while parent[r] != r:
        p ^= parity[r]
        r = parent[r]
    cur = x
    cp = p
    while parent[cur] != cur:
        nxt = parent[cur]
        ncp = cp ^ parity[cur]
        parent[cur] = r
        parity[cur] = cp
        cur = nxt
        cp = ncp
    return r, p


@njit(cache=True)
def _union(parent, parity, u, v, val):
    ru, pu = _find(parent, parity, u)
    rv, pv = _find(parent, parity, v)
    if ru == rv:
        return (pu ^ pv) == val
    parent[ru] = rv
    parity[ru] = pu ^ pv ^ val
    return True


@njit(cache=True)
def parity_consistent(n_nodes, eu, ev, val, alive):
    """True iff some 0/1 labelling ``g`` has ``g[u] ^ g[v] == val`` on every live edge."""
    parent = np.arange(n_nodes)
    parity = np.zeros(n_nodes, np.int64)
    for e in range(eu.shape[0]):
        u = eu[e]
        v = ev[e]
        if alive[u] and alive[v]:
            if not _union(parent, parity, u, v, val[e]):
                return False
    return True


@njit(cache=True)
def cut_search(base_parent, base_parity, cand_node, eu, ev, val, w, max_checks):
    """Scan size-``w`` candidate subsets in lexicographic order.

    A subset is feasible when deleting its nodes leaves the parity constraints
    on edges ``(eu, ev, val)`` consistent on top of the base union-find state.
    Returns ``(status, combo, checks)``: status 1 found, 0 none exists,
    2 check budget exhausted.
    """
    n_nodes = base_parent.shape[0]
    N = cand_node.shape[0]
    combo = np.arange(w)
    if w > N:
        return 0, combo, 0
    dead = np.zeros(n_nodes, np.bool_)
    parent = base_parent.copy()
    parity = base_parity.copy()
    checks = 0
    while True:
        for i in range(w):
            dead[cand_node[combo[i]]] = True
        parent[:] = base_parent
        parity[:] = base_parity
        ok = True
        for e in range(eu.shape[0]):
            u = eu[e]
            v = ev[e]
            if dead[u] or dead[v]:
                continue
            if not _union(parent, parity, u, v, val[e]):
                ok = False
                break
        for i in range(w):
            dead[cand_node[combo[i]]] = False
        checks += 1
        if ok:
            return 1, combo, checks
        if checks >= max_checks:
            return 2, combo, checks
        i = w - 1
        while i >= 0 and combo[i] == N - w + i:
            i -= 1
        if i < 0:
            return 0, combo, checks
        combo[i] += 1
        for j in range(i + 1, w):
            combo[j] = combo[j - 1] + 1
