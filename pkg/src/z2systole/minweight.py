"""Minimum-weight cycles in prescribed classes.

A :class:`CycleProblem` abstracts both homology and cohomology: cells carry
0/1 values, ``d_in`` is the operator that must vanish (boundary for cycles,
coboundary for cocycles), ``d_out`` spans the trivial elements, and
``functionals`` read off class coordinates. Targets are given as a boolean
table over all ``2^h`` coordinate vectors.

Engines, all exact unless noted:

* ``cover``: when every cell has at most two faces the problem is a graph
  problem. Shortest closed walks of each class come from BFS in the
  ``2^h``-sheeted cover; a shortest path in the group then combines them.
* ``enumerate``: Gray-code scan of the coset ``z0 + im(d_out)``.
* ``deepen``: iterative-deepening search over supports with parity pruning.
* ``descent``: greedy local search; an upper bound only.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .gf2 import BinaryMatrix, pack_rows, pack_vector, unpack_vector

MAX_CLASS_BITS = 20
COVER_MAX_BITS = 10
ENUM_MAX_WORK = 1 << 28


@dataclass
class Budget:
    """Limits shared by every search.

    ``enum_cap`` bounds the rank of the trivial subspace that may be enumerated,
    ``weight_cap`` the largest support the exact searches will try, and
    ``budget_ms`` the wall clock per search. ``max_nodes`` and ``max_checks``
    bound the deepening search and the cut search.
    """

    enum_cap: int = 24
    weight_cap: int | None = None
    budget_ms: float | None = None
    seed: int = 0
    max_nodes: int = 5_000_000
    max_checks: int = 50_000_000
    restarts: int = 8

    def deadline(self) -> float | None:
        return None if self.budget_ms is None else time.monotonic() + self.budget_ms / 1000.0


class BudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CycleProblem:
    d_in: np.ndarray
    d_out: np.ndarray
    functionals: np.ndarray
    reps: np.ndarray

    @property
    def ncells(self) -> int:
        return self.d_in.shape[1]

    @property
    def h(self) -> int:
        return self.functionals.shape[0]

    def cell_masks(self) -> list[int]:
        f = self.functionals.astype(np.int64)
        weights = (1 << np.arange(self.h, dtype=np.int64))
        return [int(x) for x in (weights @ f)] if self.h else [0] * self.ncells

    def coords(self, z: np.ndarray) -> int:
        bits = self.functionals.astype(np.int64) @ z.astype(np.int64) % 2
        return int(sum(int(b) << i for i, b in enumerate(bits)))

    def rep_for(self, t: int) -> np.ndarray:
        z = np.zeros(self.ncells, dtype=np.int64)
        for i in range(self.h):
            if (t >> i) & 1:
                z ^= self.reps[i].astype(np.int64)
        return z.astype(np.uint8)

    def is_closed(self, z: np.ndarray) -> bool:
        return not (self.d_in.astype(np.int64) @ z.astype(np.int64) % 2).any()


@dataclass(frozen=True)
class Solution:
    bits: np.ndarray
    weight: int
    certified: bool
    method: str
    target: int


def accept_class(h: int, t: int) -> np.ndarray:
    acc = np.zeros(1 << h, dtype=bool)
    acc[t] = True
    return acc


def accept_detected(h: int, alpha: int) -> np.ndarray:
    idx = np.arange(1 << h, dtype=np.int64)
    par = np.zeros(1 << h, dtype=np.int64)
    m = idx & alpha
    while m.any():
        par ^= m & 1
        m >>= 1
    return par.astype(bool)


def accept_nonzero(h: int) -> np.ndarray:
    acc = np.ones(1 << h, dtype=bool)
    acc[0] = False
    return acc


def _lex_key(bits: np.ndarray) -> tuple[int, ...]:
    return tuple(np.flatnonzero(bits).tolist())


def _better(a: Solution | None, bits: np.ndarray, w: int) -> bool:
    return a is None or w < a.weight or (w == a.weight and _lex_key(bits) < _lex_key(a.bits))


# -- graph cover ------------------------------------------------------------------------


def cover_csr(n_base: int, eu: np.ndarray, ev: np.ndarray, masks: np.ndarray, nsheets: int):
    """CSR of the cover: node ``v * nsheets + s``, edge ``e`` joins ``(u, s)`` and ``(v, s ^ m_e)``.

    Returns ``(indptr, indices, slot_edge)``; slots are ordered by target node.
    """
    s = np.arange(nsheets, dtype=np.int64)
    E = eu.shape[0]
    src = (eu[:, None] * nsheets + s[None, :]).ravel()
    dst = (ev[:, None] * nsheets + (s[None, :] ^ masks[:, None])).ravel()
    eid = np.repeat(np.arange(E, dtype=np.int64), nsheets)
    a = np.concatenate([src, dst])
    b = np.concatenate([dst, src])
    ids = np.concatenate([eid, eid])
    order = np.lexsort((ids, b, a))
    a, b, ids = a[order], b[order], ids[order]
    n = n_base * nsheets
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, a + 1, 1)
    return np.cumsum(indptr), b.astype(np.int64), ids.astype(np.int64)


def cover_walk(indptr, indices, slot_edge, nsheets: int, v: int, s: int) -> list[tuple[int, int]]:
    """Shortest walk ``(v, 0) -> (v, s)`` as a list of ``(edge, base vertex reached)``."""
    src = v * nsheets
    dist, parent, pslot = kernels.bfs(indptr, indices, src)
    node = v * nsheets + s
    if dist[node] < 0:
        raise ValueError("target sheet unreachable")
    steps = []
    while node != src:
        steps.append((int(slot_edge[pslot[node]]), int(node // nsheets)))
        node = int(parent[node])
    steps.reverse()
    return steps


def cover_applicable(problem: CycleProblem) -> bool:
    if problem.h > COVER_MAX_BITS:
        return False
    if problem.ncells == 0:
        return True
    return int(problem.d_in.sum(axis=0).max(initial=0)) <= 2


def _solve_cover(problem: CycleProblem, accept: np.ndarray) -> Solution:
    R, C = problem.d_in.shape
    ghost = R
    eu = np.full(C, ghost, dtype=np.int64)
    ev = np.full(C, ghost, dtype=np.int64)
    for c in range(C):
        rows = np.flatnonzero(problem.d_in[:, c])
        if rows.size >= 1:
            eu[c] = rows[0]
        if rows.size == 2:
            ev[c] = rows[1]
    masks = np.asarray(problem.cell_masks(), dtype=np.int64)
    S = 1 << problem.h
    indptr, indices, slot_edge = cover_csr(R + 1, eu, ev, masks, S)
    L, arg = kernels.fiber_distances(indptr, indices, R + 1, S)
    # shortest paths in the group Z_2^h with step costs L
    steps = [s for s in range(1, S) if L[s] > 0]
    D = np.full(S, np.iinfo(np.int64).max, dtype=np.int64)
    prev = np.full(S, -1, dtype=np.int64)
    D[0] = 0
    heap = [(0, 0)]
    while heap:
        d, t = heapq.heappop(heap)
        if d > D[t]:
            continue
        for s in steps:
            nd = d + int(L[s])
            u = t ^ s
            if nd < D[u]:
                D[u] = nd
                prev[u] = s
                heapq.heappush(heap, (nd, u))
    targets = np.flatnonzero(accept)
    reach = targets[D[targets] < np.iinfo(np.int64).max]
    if reach.size == 0:
        raise ValueError("no closed element in the requested classes")
    t = int(reach[np.argmin(D[reach])])
    z = np.zeros(C, dtype=np.uint8)
    u = t
    while u:
        s = int(prev[u])
        for e, _ in cover_walk(indptr, indices, slot_edge, S, int(arg[s]), s):
            z[e] ^= 1
        u ^= s
    w = int(z.sum())
    if not problem.is_closed(z) or problem.coords(z) != t or w != D[t]:
        raise AssertionError("cover reconstruction disagrees with its distance bound")
    return Solution(z, w, True, "cover", t)


# -- coset enumeration ---------------------------------------------------------------------


def enumerate_applicable(problem: CycleProblem, accept: np.ndarray, budget: Budget) -> bool:
    r = BinaryMatrix(problem.d_out).rank() if problem.d_out.size else 0
    return r <= budget.enum_cap and int(accept.sum()) * (1 << r) <= ENUM_MAX_WORK


def _solve_enumerate(problem: CycleProblem, accept: np.ndarray, budget: Budget) -> Solution:
    basis = BinaryMatrix(problem.d_out).column_basis() if problem.d_out.size else np.zeros((0, problem.ncells), np.uint8)
    if basis.shape[0] > budget.enum_cap:
        raise BudgetExhausted(f"trivial subspace rank {basis.shape[0]} exceeds enum cap {budget.enum_cap}")
    packed = pack_rows(basis) if basis.shape[0] else np.zeros((0, max(1, (problem.ncells + 63) // 64)), np.uint64)
    best: Solution | None = None
    for t in np.flatnonzero(accept).tolist():
        z0 = pack_vector(problem.rep_for(t))
        w, vec = kernels.coset_min(z0, packed)
        bits = unpack_vector(vec, problem.ncells)
        if _better(best, bits, int(w)):
            best = Solution(bits, int(w), True, "enumerate", t)
    if best is None:
        raise ValueError("no target class")
    return best


# -- iterative deepening -------------------------------------------------------------------


def _solve_deepen(problem: CycleProblem, accept: np.ndarray, budget: Budget, upper: int | None = None) -> Solution | None:
    """Exact search by increasing weight; ``None`` when the budget runs out first."""
    C = problem.ncells
    faces = [tuple(np.flatnonzero(problem.d_in[:, c]).tolist()) for c in range(C)]
    cofaces = [tuple(np.flatnonzero(problem.d_in[f, :]).tolist()) for f in range(problem.d_in.shape[0])]
    masks = problem.cell_masks()
    maxf = max((len(f) for f in faces), default=1) or 1
    acc = accept.tolist()
    cap = C if upper is None else min(upper, C)
    if budget.weight_cap is not None:
        cap = min(cap, budget.weight_cap)
    deadline = budget.deadline()
    nodes = 0

    in_z = bytearray(C)
    z: list[int] = []
    odd: set[int] = set()
    state = {"coords": 0}
    best: list[tuple[int, ...] | None] = [None]

    def toggle(t: int):
        in_z[t] ^= 1
        state["coords"] ^= masks[t]
        for f in faces[t]:
            if f in odd:
                odd.remove(f)
            else:
                odd.add(f)

    def rec(floor: int, W: int):
        nonlocal nodes
        nodes += 1
        if nodes > budget.max_nodes or (deadline is not None and nodes % 4096 == 0 and time.monotonic() > deadline):
            raise BudgetExhausted("deepening search ran out of budget")
        size = len(z)
        if not odd:
            if size and acc[state["coords"]]:
                cand = tuple(sorted(z))
                if best[0] is None or cand < best[0]:
                    best[0] = cand
                return
            if size >= W:
                return
            for t in range(floor + 1, C):
                if size == 0 and best[0] is not None and t > best[0][0]:
                    break
                if in_z[t]:
                    continue
                z.append(t)
                toggle(t)
                rec(t, W)
                toggle(t)
                z.pop()
            return
        if (W - size) * maxf < len(odd):
            return
        f = min(odd)
        for t in cofaces[f]:
            if t <= floor or in_z[t]:
                continue
            z.append(t)
            toggle(t)
            rec(floor, W)
            toggle(t)
            z.pop()

    try:
        for W in range(1, cap + 1):
            rec(-1, W)
            if best[0] is not None:
                bits = np.zeros(C, dtype=np.uint8)
                bits[list(best[0])] = 1
                return Solution(bits, W, True, "deepen", problem.coords(bits))
    except BudgetExhausted:
        return None
    return None


# -- local search --------------------------------------------------------------------------


def _solve_descent(problem: CycleProblem, accept: np.ndarray, budget: Budget) -> Solution:
    rng = np.random.default_rng(budget.seed)
    B = problem.d_out.astype(np.int64)
    colw = B.sum(axis=0)
    best: Solution | None = None
    for t in np.flatnonzero(accept)[:64].tolist():
        for r in range(max(1, budget.restarts)):
            z = problem.rep_for(t).astype(np.int64)
            if r and B.shape[1]:
                mix = rng.integers(0, 2, size=B.shape[1])
                z = (z + B @ mix) % 2
            while B.shape[1]:
                delta = colw - 2 * (z @ B)
                j = int(np.argmin(delta))
                if delta[j] >= 0:
                    break
                z = (z + B[:, j]) % 2
            bits = z.astype(np.uint8)
            if _better(best, bits, int(bits.sum())):
                best = Solution(bits, int(bits.sum()), False, "descent", t)
    if best is None:
        raise ValueError("no target class")
    return best


def min_weight(problem: CycleProblem, accept: np.ndarray, budget: Budget | None = None, method: str = "auto") -> Solution:
    """Lightest closed element whose class is accepted.

    ``method`` is one of ``auto``, ``cover``, ``enumerate``, ``deepen``,
    ``descent``. ``auto`` tries the exact engines in that order and falls back
    to an uncertified local-search bound when none finishes within budget.
    """
    budget = budget or Budget()
    if problem.h > MAX_CLASS_BITS:
        raise ValueError(f"class group of rank {problem.h} is too large to tabulate")
    accept = np.asarray(accept, dtype=bool)
    if accept.shape != (1 << problem.h,):
        raise ValueError("accept table has the wrong length")
    if not accept.any():
        raise ValueError("no class is accepted")
    if method == "cover" or (method == "auto" and cover_applicable(problem)):
        if not cover_applicable(problem):
            raise ValueError("cover engine needs cells with at most two faces")
        return _verified(problem, accept, _solve_cover(problem, accept))
    if method == "enumerate" or (method == "auto" and enumerate_applicable(problem, accept, budget)):
        return _verified(problem, accept, _solve_enumerate(problem, accept, budget))
    if method == "descent":
        return _verified(problem, accept, _solve_descent(problem, accept, budget))
    if method not in ("auto", "deepen"):
        raise ValueError(f"unknown method {method!r}")
    bound = _solve_descent(problem, accept, budget) if method == "auto" else None
    exact = _solve_deepen(problem, accept, budget, None if bound is None else bound.weight)
    if exact is not None:
        return _verified(problem, accept, exact)
    if bound is None:
        raise BudgetExhausted("deepening search ran out of budget")
    return _verified(problem, accept, bound)


def _verified(problem: CycleProblem, accept: np.ndarray, sol: Solution) -> Solution:
    if not problem.is_closed(sol.bits):
        raise AssertionError(f"{sol.method} returned a non-closed element")
    t = problem.coords(sol.bits)
    if not accept[t]:
        raise AssertionError(f"{sol.method} returned an element of a rejected class")
    return Solution(sol.bits, int(sol.bits.sum()), sol.certified, sol.method, t)
