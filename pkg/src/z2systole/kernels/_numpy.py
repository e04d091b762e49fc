"""Vectorised numpy/scipy versions of the compiled kernels.

Same signatures and same outputs as ``_numba``; used when numba is missing or
disabled through ``Z2SYS_NO_NUMBA``.
"""
from itertools import combinations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path


def _lex_less(a, b):
    x = a ^ b
    nz = np.flatnonzero(x)
    if nz.size == 0:
        return False
    i = nz[0]
    low = x[i] & (~x[i] + np.uint64(1))
    return bool(a[i] & low)


def gf2_rref(W, ncols):
    m, nw = W.shape
    pivots = []
    rank = 0
    for c in range(ncols):
        if rank == m:
            break
        word = c >> 6
        shift = np.uint64(c & 63)
        col = (W[rank:, word] >> shift) & np.uint64(1)
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            W[[rank, piv]] = W[[piv, rank]]
        mask = ((W[:, word] >> shift) & np.uint64(1)).astype(bool)
        mask[rank] = False
        W[mask] ^= W[rank]
        pivots.append(c)
        rank += 1
    return np.asarray(pivots, dtype=np.int64)


def bfs(indptr, indices, source):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    parent = np.full(n, -1, np.int64)
    pslot = np.full(n, -1, np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while frontier.size:
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        owner = np.repeat(frontier, counts)
        offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        slots = np.repeat(starts, counts) + offs
        nbrs = indices[slots]
        fresh = dist[nbrs] < 0
        nbrs, owner, slots = nbrs[fresh], owner[fresh], slots[fresh]
        new, first = np.unique(nbrs, return_index=True)
        order = np.argsort(first, kind="stable")
        new, first = new[order], first[order]
        level += 1
        dist[new] = level
        parent[new] = owner[first]
        pslot[new] = slots[first]
        frontier = new
    return dist, parent, pslot


def fiber_distances(indptr, indices, nbase, nsheets):
    n = indptr.shape[0] - 1
    graph = csr_matrix((np.ones(indices.shape[0]), indices, indptr), shape=(n, n))
    best = np.full(nsheets, -1, np.int64)
    arg = np.full(nsheets, -1, np.int64)
    chunk = max(1, 2_000_000 // max(n, 1))
    for lo in range(0, nbase, chunk):
        vs = np.arange(lo, min(nbase, lo + chunk))
        D = shortest_path(graph, unweighted=True, directed=True, indices=vs * nsheets)
        for s in range(1, nsheets):
            d = D[np.arange(vs.size), vs * nsheets + s]
            finite = np.isfinite(d)
            if not finite.any():
                continue
            i = int(np.argmin(np.where(finite, d, np.inf)))
            val = int(d[i])
            if best[s] < 0 or val < best[s]:
                best[s] = val
                arg[s] = vs[i]
    return best, arg


def coset_min(z0, basis):
    d, nw = basis.shape
    d1 = min(d, 14)
    low = np.zeros((1, nw), dtype=np.uint64)
    for j in range(d1):
        low = np.concatenate([low, low ^ basis[j]])
    best = z0.copy()
    bw = int(np.bitwise_count(z0).sum())
    high = np.zeros(nw, dtype=np.uint64)
    for g in range(1 << (d - d1)):
        if g:
            j = d1
            while not (g >> (j - d1)) & 1:
                j += 1
            high = high ^ basis[j]
        vals = low ^ (z0 ^ high)
        weights = np.bitwise_count(vals).sum(axis=1)
        w = int(weights.min())
        if w > bw:
            continue
        for i in np.flatnonzero(weights == w):
            if w < bw or _lex_less(vals[i], best):
                bw = w
                best = vals[i].copy()
    # Gray-code and table orders differ, but the (weight, lex) minimum is unique
    return bw, best


def parity_consistent(n_nodes, eu, ev, val, alive):
    live = alive[eu] & alive[ev]
    u, v, a = eu[live], ev[live], val[live].astype(np.int64)
    rows = np.concatenate([2 * u, 2 * u + 1])
    cols = np.concatenate([2 * v + a, 2 * v + 1 - a])
    graph = csr_matrix((np.ones(rows.size), (rows, cols)), shape=(2 * n_nodes, 2 * n_nodes))
    _, labels = connected_components(graph, directed=False)
    return bool(np.all(labels[0::2] != labels[1::2]))


def _root_edges(base_parent, base_parity):
    n = base_parent.shape[0]
    eu, ev, val = [], [], []
    for x in range(n):
        r, p = x, 0
        while base_parent[r] != r:
            p ^= int(base_parity[r])
            r = int(base_parent[r])
        if r != x:
            eu.append(x)
            ev.append(r)
            val.append(p)
    return np.asarray(eu, np.int64), np.asarray(ev, np.int64), np.asarray(val, np.int64)


def cut_search(base_parent, base_parity, cand_node, eu, ev, val, w, max_checks):
    n_nodes = base_parent.shape[0]
    N = cand_node.shape[0]
    if w > N:
        return 0, np.arange(w), 0
    bu, bv, bval = _root_edges(base_parent, base_parity)
    eu = np.concatenate([bu, eu])
    ev = np.concatenate([bv, ev])
    val = np.concatenate([bval, val])
    alive = np.ones(n_nodes, dtype=bool)
    checks = 0
    combo = np.arange(w)
    for c in combinations(range(N), w):
        combo = np.asarray(c, dtype=np.int64)
        alive[cand_node[combo]] = False
        ok = parity_consistent(n_nodes, eu, ev, val, alive)
        alive[cand_node[combo]] = True
        checks += 1
        if ok:
            return 1, combo, checks
        if checks >= max_checks:
            return 2, combo, checks
    return 0, combo, checks
