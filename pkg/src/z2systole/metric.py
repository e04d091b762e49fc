"""Combinatorial metric: distances, balls, spheres and the covering constructions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .complex import Chain, SimplicialComplex, Subcomplex
from .errors import LemmaViolation

UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Edge-path distance from ``center``; ``dist[i]`` belongs to ``M.vertices[i]``."""

    complex: SimplicialComplex
    center: int
    dist: np.ndarray
    parent: np.ndarray

    def __getitem__(self, v: int) -> float:
        d = int(self.dist[self.complex.vertex_positions([v])[0]])
        return float("inf") if d < 0 else d

    def finite(self) -> np.ndarray:
        """Distances with unreachable vertices mapped to a value larger than any radius."""
        big = self.complex.num_vertices + 1
        return np.where(self.dist < 0, big, self.dist)

    def path_to(self, v: int) -> list[int]:
        """A shortest vertex path from the centre to ``v``."""
        ids = self.complex.vertices
        i = int(self.complex.vertex_positions([v])[0])
        if self.dist[i] < 0:
            raise ValueError(f"vertex {v} is not reachable from {self.center}")
        out = [int(ids[i])]
        while self.parent[i] >= 0:
            i = int(self.parent[i])
            out.append(int(ids[i]))
        return out[::-1]

    def is_one_lipschitz(self) -> bool:
        indptr, nbrs, _ = self.complex.adjacency()
        d = self.dist
        src = np.repeat(np.arange(d.size), np.diff(indptr))
        a, b = d[src], d[nbrs]
        both = (a >= 0) & (b >= 0)
        return bool(np.all(np.abs(a[both] - b[both]) <= 1) and np.all((a >= 0) == (b >= 0)))


def distances(M: SimplicialComplex, x: int) -> DistanceField:
    key = ("dist", int(x))
    if key not in M._cache:
        if x not in M:
            raise ValueError(f"{x} is not a vertex")
        indptr, nbrs, _ = M.adjacency()
        dist, parent, _ = kernels.bfs(indptr, nbrs, int(M.vertex_positions([x])[0]))
        M._cache[key] = DistanceField(M, int(x), dist, parent)
    return M._cache[key]


def _vertex_pos(M: SimplicialComplex, j: int) -> np.ndarray:
    key = ("vpos", j)
    if key not in M._cache:
        S = M.simplices(j)
        M._cache[key] = M.vertex_positions(S.ravel()).reshape(S.shape)
    return M._cache[key]


@dataclass(frozen=True, eq=False)
class BallSphere:
    center: int
    radius: int
    ball: Subcomplex
    sphere: Subcomplex
    field: DistanceField = field(repr=False)

    @property
    def vol(self) -> int:
        return self.ball.count(self.ball.parent.n)

    @property
    def area(self) -> int:
        return self.sphere.count(self.ball.parent.n - 1)


def ball(M: SimplicialComplex, x: int, r: int) -> BallSphere:
    """``B(x, r)`` and ``S(x, r)``.

    For ``r >= 1`` the ball is the closure of the top simplices whose vertices
    are all within ``r`` and one of which is closer than ``r``; the sphere is
    the part of the ball all of whose vertices sit at distance exactly ``r``.
    Radius 0 gives the single vertex ``x`` for both.
    """
    if not M.is_pure:
        raise ValueError("balls need a pure complex")
    if r < 0 or int(r) != r:
        raise ValueError("radius must be a non-negative integer")
    r = int(r)
    df = distances(M, x)
    if r == 0:
        pt = Subcomplex.from_simplices(M, [(x,)])
        return BallSphere(int(x), 0, pt, pt, df)
    d = df.finite()
    D = d[_vertex_pos(M, M.n)]
    top = (D.max(axis=1) <= r) & (D.min(axis=1) < r)
    masks = [np.zeros(M.count(j), dtype=bool) for j in range(M.n + 1)]
    masks[M.n] = top
    B = Subcomplex(M, masks).closure()
    inside = d[_vertex_pos(M, 0)[:, 0]] <= r
    if not np.array_equal(B.masks[0], inside):
        raise AssertionError("ball misses a vertex within the radius")
    sph = [B.masks[j] & np.all(d[_vertex_pos(M, j)] == r, axis=1) for j in range(M.n + 1)]
    return BallSphere(int(x), r, B, Subcomplex(M, sph), df)


def h_volume(H: Subcomplex, bs: BallSphere) -> int:
    """Number of (n-1)-simplices of ``H`` inside the ball."""
    j = H.parent.n - 1
    return int(np.count_nonzero(H.masks[j] & bs.ball.masks[j]))


def check_separation(M: SimplicialComplex, x: int, r: int, path) -> bool:
    """Whether an edge path leaving ``B(x, r)`` passes through ``S(x, r)``.

    Paths that do not start inside distance ``r`` and end outside it are
    vacuously fine.
    """
    path = [int(v) for v in path]
    for a, b in zip(path, path[1:]):
        if a != b and (min(a, b), max(a, b)) not in M:
            raise ValueError(f"({a}, {b}) is not an edge")
    df = distances(M, x)
    d = [df[v] for v in path]
    if not (d[0] < r and d[-1] > r):
        return True
    return any(dv == r for dv in d)


@dataclass(frozen=True)
class CoareaResult:
    volume: int
    sphere_sum: int
    witness: dict
    ok: bool


def coarea_check(M: SimplicialComplex, x: int, r: int) -> CoareaResult:
    """``Vol B(x, r) >= sum_{i<=r} Area S(x, i)`` with an explicit injection.

    Each sphere facet tau in ``S(x, i)`` is sent to a top simplex of ``B(x, i)``
    containing it and a vertex at distance ``i - 1``.
    """
    n = M.n
    vol = ball(M, x, r).vol
    witness: dict = {}
    total = 0
    cof_ptr, cof = M.cofaces(n - 1)
    for i in range(1, r + 1):
        bs = ball(M, x, i)
        d = bs.field.finite()
        tpos = _vertex_pos(M, n)
        for tau in bs.sphere.indices(n - 1).tolist():
            total += 1
            image = None
            for s in cof[cof_ptr[tau]: cof_ptr[tau + 1]].tolist():
                if bs.ball.masks[n][s] and (d[tpos[s]] == i - 1).any():
                    image = s
                    break
            if image is None:
                raise LemmaViolation("co-area", f"sphere facet {M.simplex(n - 1, tau)} at radius {i} has no inward top simplex")
            witness[(i, M.simplex(n - 1, tau))] = M.simplex(n, image)
    images = list(witness.values())
    injective = len(set(images)) == len(images)
    contained = all(s in ball(M, x, r).ball for s in images)
    return CoareaResult(vol, total, witness, bool(injective and contained and vol >= total))


@dataclass(frozen=True)
class VitaliResult:
    selected: list[int]
    order: str
    ok: bool
    witness: str | None


def vitali_subcover(M: SimplicialComplex, H: Subcomplex, balls, order: str = "largest-first") -> VitaliResult:
    """Greedy disjoint subfamily whose doubles cover ``H``.

    ``balls`` holds one ``(center, radius)`` pair per vertex of ``H`` with
    radius at least 1. ``order`` is ``largest-first`` (radii non-increasing)
    or ``paper`` (radii non-decreasing); ties go to the lower index. Returns
    the selected indices in ascending order and the outcome of re-checking
    disjointness and the doubled cover.
    """
    balls = [(int(c), int(r)) for c, r in balls]
    if any(r < 1 for _, r in balls):
        raise ValueError("radii must be at least 1")
    centers = sorted(c for c, _ in balls)
    if centers != sorted(int(v) for v in H.vertex_ids()):
        raise ValueError("need exactly one ball per vertex of H")
    if order == "largest-first":
        seq = sorted(range(len(balls)), key=lambda i: (-balls[i][1], i))
    elif order == "paper":
        seq = sorted(range(len(balls)), key=lambda i: (balls[i][1], i))
    else:
        raise ValueError(f"unknown order {order!r}")
    n = M.n
    used = np.zeros(M.vol, dtype=bool)
    chosen = []
    for i in seq:
        top = ball(M, *balls[i]).ball.masks[n]
        if not (top & used).any():
            chosen.append(i)
            used |= top
    chosen.sort()
    # re-check from scratch
    witness = None
    seen = np.zeros(M.vol, dtype=bool)
    for i in chosen:
        top = ball(M, *balls[i]).ball.masks[n]
        if (top & seen).any():
            witness = f"balls overlap at top simplex {M.simplex(n, int(np.flatnonzero(top & seen)[0]))}"
            break
        seen |= top
    if witness is None:
        cover = Subcomplex.empty(M)
        for i in chosen:
            c, r = balls[i]
            cover = cover | ball(M, c, 2 * r).ball
        missing = H.minus(cover)
        if not missing.is_empty():
            witness = f"simplex {missing.all_simplices()[0]} of H lies outside every doubled ball"
    return VitaliResult(chosen, order, witness is None, witness)


def factor_cycle(M: SimplicialComplex, z: Chain, x: int, r: int) -> list[list[int]]:
    """Split a 1-cycle inside ``B(x, r)`` into loops through ``x`` of length ``<= 2r + 1``.

    The loop for edge ``(u, v)`` runs down the BFS tree to ``u``, across the
    edge and back up from ``v``. The loops sum to ``z``.
    """
    if z.k != 1 or not z.is_cycle():
        raise ValueError("factor_cycle needs a 1-cycle")
    bs = ball(M, x, r)
    if not np.all(bs.ball.masks[1][z.indices()]):
        raise ValueError("cycle is not contained in the ball")
    df = bs.field
    loops = []
    for u, v in z.support:
        pu, pv = df.path_to(u), df.path_to(v)
        loop = pu + pv[::-1]
        if len(loop) - 1 > 2 * r + 1:
            raise LemmaViolation("curve factoring", f"loop of length {len(loop) - 1} exceeds {2 * r + 1}")
        loops.append(loop)
    if loops_to_chain(M, loops) != z:
        raise LemmaViolation("curve factoring", "loops do not sum to the cycle")
    return loops


def loops_to_chain(M: SimplicialComplex, loops) -> Chain:
    bits = np.zeros(M.count(1), dtype=np.uint8)
    for loop in loops:
        for a, b in zip(loop, loop[1:]):
            bits[M.index((a, b))] ^= 1
    return Chain(M, 1, bits)
