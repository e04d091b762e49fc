"""Example spaces and scaling families."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .complex import (
    Chain,
    SimplicialComplex,
    barycentric_subdivision,
    build_complex,
    is_closed_pseudomanifold,
)

FAMILIES = ("cycle", "grid_torus", "torus7", "rp2", "s1_x_sphere", "connected_sum", "subdivision", "random")


def cycle_graph(m: int) -> SimplicialComplex:
    """The circle C_m as a pure 1-complex on vertices 0..m-1."""
    if m < 3:
        raise ValueError("a simplicial circle needs m >= 3")
    return build_complex([[i, (i + 1) % m] for i in range(m)], 1)


def grid_torus(k: int) -> SimplicialComplex:
    """k x k flat torus, each square cut along the (i,j)-(i+1,j+1) diagonal.

    Vertex ``(i, j)`` is ``i * k + j``; there are ``2 k^2`` triangles.
    """
    if k < 3:
        raise ValueError("grid_torus needs k >= 3")

    def v(i, j):
        return (i % k) * k + (j % k)

    tris = []
    for i in range(k):
        for j in range(k):
            tris.append([v(i, j), v(i + 1, j), v(i + 1, j + 1)])
            tris.append([v(i, j), v(i, j + 1), v(i + 1, j + 1)])
    return build_complex(tris, 2)


def torus7() -> SimplicialComplex:
    """Möbius–Császár 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append([i, (i + 1) % 7, (i + 3) % 7])
        tris.append([i, (i + 2) % 7, (i + 3) % 7])
    return build_complex(tris, 2)


def rp2_minimal() -> SimplicialComplex:
    """The 6-vertex real projective plane (antipodal quotient of the icosahedron)."""
    tris = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
    ]
    return build_complex(tris, 2)


def s1_x_sphere(p: int, n: int) -> SimplicialComplex:
    """Staircase triangulation of C_p x boundary(Delta^n), an n-manifold.

    Vertex ``(i, a)`` with ``i`` in C_p and ``a`` in 0..n is ``i * (n+1) + a``.
    Each prism [i, i+1] x sigma splits into n simplices along the staircase.
    """
    if p < 3:
        raise ValueError("s1_x_sphere needs p >= 3")
    if n not in (2, 3, 4):
        raise ValueError("s1_x_sphere supports n in {2, 3, 4}")

    def v(i, a):
        return (i % p) * (n + 1) + a

    tops = []
    for i in range(p):
        for sigma in itertools.combinations(range(n + 1), n):
            for j in range(n):
                tops.append([v(i, a) for a in sigma[: j + 1]] + [v(i + 1, a) for a in sigma[j:]])
    return build_complex(tops, n)


@dataclass
class ClassMap:
    """How the summands of a connected sum sit inside it.

    ``vertex_maps[i]`` sends vertex ids of summand ``i`` (0 or 1) to ids of
    the sum. Every (n-1)-simplex of a summand survives the gluing, so
    (n-1)-chains push forward simplex by simplex.
    """

    total: SimplicialComplex
    summands: tuple[SimplicialComplex, SimplicialComplex]
    vertex_maps: tuple[dict[int, int], dict[int, int]]
    removed: tuple[tuple[int, ...], tuple[int, ...]]
    _systolic: dict = field(default_factory=dict, repr=False)

    def pushforward(self, which: int, chain: Chain) -> Chain:
        src = self.summands[which]
        if chain.complex is not src:
            raise ValueError("chain does not live on the requested summand")
        vmap = self.vertex_maps[which]
        images = [[vmap[v] for v in s] for s in chain.support]
        return Chain.from_simplices(self.total, chain.k, images)

    def summand_cycle(self, which: int, budget=None) -> Chain:
        """Pushforward of a minimal nontrivial (n-1)-cycle of summand ``which``."""
        if which not in self._systolic:
            from .systolic import systole

            res = systole(self.summands[which], self.total.n - 1, budget)
            self._systolic[which] = res
        return self.pushforward(which, self._systolic[which].chain)

    def summand_systole(self, which: int, budget=None) -> int:
        self.summand_cycle(which, budget)
        return self._systolic[which].weight

    def alpha_star(self, budget=None) -> Chain:
        """A cycle representing the class (1, 1)."""
        return self.summand_cycle(0, budget) + self.summand_cycle(1, budget)


def connected_sum(M1: SimplicialComplex, M2: SimplicialComplex) -> tuple[SimplicialComplex, ClassMap]:
    """Remove the first top simplex of each summand and glue along its boundary.

    The boundaries are identified by the order-preserving vertex bijection;
    the remaining vertices of ``M2`` are shifted past those of ``M1``.
    """
    if M1.n != M2.n:
        raise ValueError("connected sum needs summands of equal dimension")
    for M in (M1, M2):
        if not is_closed_pseudomanifold(M):
            raise ValueError("connected sum needs closed pseudomanifolds")
    n = M1.n
    cut1 = M1.simplex(n, 0)
    cut2 = M2.simplex(n, 0)
    map1 = {int(v): int(v) for v in M1.vertices}
    offset = int(M1.vertices.max()) + 1
    map2 = {}
    fresh = offset
    glue = dict(zip(cut2, cut1))
    for v in M2.vertices:
        v = int(v)
        if v in glue:
            map2[v] = glue[v]
        else:
            map2[v] = fresh
            fresh += 1
    tops = [list(s) for s in M1.maximal_simplices if s != cut1]
    tops += [[map2[v] for v in s] for s in M2.maximal_simplices if s != cut2]
    M = build_complex(tops, n)
    return M, ClassMap(M, (M1, M2), (map1, map2), (cut1, cut2))


def subdivide(M: SimplicialComplex, scheme: str = "barycentric", t: int = 1, check: bool = True) -> SimplicialComplex:
    """``t``-fold iterated barycentric subdivision.

    With ``check`` the mod-2 Betti numbers are compared before and after.
    """
    if scheme != "barycentric":
        raise ValueError(f"unknown subdivision scheme {scheme!r}")
    if t < 1:
        raise ValueError("t must be >= 1")
    out = M
    for _ in range(t):
        out, _ = barycentric_subdivision(out)
    if check:
        from .homology import betti_numbers

        if betti_numbers(M) != betti_numbers(out):
            raise AssertionError("subdivision changed mod-2 Betti numbers")
    return out


def random_pure_complex(n_vertices: int, n_top: int, dim: int = 2, seed=None) -> SimplicialComplex:
    """``n_top`` distinct ``dim``-simplices drawn uniformly from the vertex set."""
    rng = np.random.default_rng(seed)
    pool = list(itertools.combinations(range(n_vertices), dim + 1))
    if n_top > len(pool) or n_top < 1:
        raise ValueError("n_top out of range")
    pick = rng.choice(len(pool), size=n_top, replace=False)
    return build_complex([pool[i] for i in sorted(pick)], dim)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")

    @classmethod
    def of(cls, family: str, **params) -> "FamilySpec":
        return cls(family, tuple(sorted(params.items())))

    @property
    def kwargs(self) -> dict:
        return dict(self.params)

    @property
    def label(self) -> str:
        if not self.params:
            return self.family
        inner = ",".join(f"{k}={v}" for k, v in self.params if not isinstance(v, SimplicialComplex))
        return f"{self.family}({inner})"


def make_family(spec: FamilySpec) -> SimplicialComplex:
    p = spec.kwargs
    if spec.family == "cycle":
        return cycle_graph(int(p["m"]))
    if spec.family == "grid_torus":
        return grid_torus(int(p["k"]))
    if spec.family == "torus7":
        return torus7()
    if spec.family == "rp2":
        return rp2_minimal()
    if spec.family == "s1_x_sphere":
        return s1_x_sphere(int(p["p"]), int(p["n"]))
    if spec.family == "connected_sum":
        return connected_sum(p["a"], p["b"])[0]
    if spec.family == "subdivision":
        return subdivide(p["base"], "barycentric", int(p.get("t", 1)))
    if spec.family == "random":
        return random_pure_complex(int(p["vertices"]), int(p["top"]), int(p.get("dim", 2)), p.get("seed", 0))
    raise ValueError(spec.family)
