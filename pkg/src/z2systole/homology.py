"""Mod-2 (co)homology, cup products, Poincaré duality and complement tests."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .complex import (
    Chain,
    Cochain,
    SimplicialComplex,
    Subcomplex,
    barycentric_subdivision,
    global_offsets,
    is_closed_pseudomanifold,
)
from .errors import DegeneratePairingError
from .gf2 import BinaryMatrix
from . import kernels


@dataclass(frozen=True, eq=False)
class HomologyContext:
    """Dual bases of H_k and H^k.

    ``cycles[i]`` and ``cocycles[j]`` are representatives with
    ``cocycles[j](cycles[i]) = [i == j]``, so the coordinates of a cycle are
    its values on ``cocycles`` and vice versa.
    """

    k: int
    cycles: np.ndarray
    cocycles: np.ndarray
    dim_cycles: int
    rank_boundaries: int

    @property
    def dim(self) -> int:
        return self.cycles.shape[0]

    def homology_coords(self, bits: np.ndarray) -> np.ndarray:
        return (self.cocycles.astype(np.int64) @ bits.astype(np.int64) % 2).astype(np.uint8)

    def cohomology_coords(self, bits: np.ndarray) -> np.ndarray:
        return (self.cycles.astype(np.int64) @ bits.astype(np.int64) % 2).astype(np.uint8)

    def cycle_from_coords(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return (c @ self.cycles.astype(np.int64) % 2).astype(np.uint8) if self.dim else np.zeros(self.cycles.shape[1], np.uint8)

    def cocycle_from_coords(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return (c @ self.cocycles.astype(np.int64) % 2).astype(np.uint8) if self.dim else np.zeros(self.cocycles.shape[1], np.uint8)


def _independent_mod(span_cols: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Rows of ``candidates`` that extend the column span of ``span_cols`` to a basis."""
    m = span_cols.shape[1]
    stacked = np.concatenate([span_cols, candidates.T], axis=1)
    piv = BinaryMatrix(stacked).pivot_columns()
    return candidates[piv[piv >= m] - m]


def homology_context(M: SimplicialComplex, k: int) -> HomologyContext:
    if not 0 <= k <= M.n:
        raise ValueError(f"degree {k} outside 0..{M.n}")
    key = ("homology", k)
    if key in M._cache:
        return M._cache[key]
    dk = M.boundary_dense(k)
    dk1 = M.boundary_dense(k + 1)
    Z = BinaryMatrix(dk).nullspace()
    cycles = _independent_mod(dk1, Z)
    Zc = BinaryMatrix(dk1.T).nullspace()
    cocycles_raw = _independent_mod(dk.T, Zc)
    if cycles.shape[0] != cocycles_raw.shape[0]:
        raise AssertionError("dim H_k != dim H^k over a field")
    rank_b = Z.shape[0] - cycles.shape[0]
    if cycles.shape[0]:
        P = BinaryMatrix(cocycles_raw) @ BinaryMatrix(cycles.T)
        cocycles = (P.inverse() @ BinaryMatrix(cocycles_raw)).data
    else:
        cocycles = cocycles_raw
    ctx = HomologyContext(k, cycles, cocycles, Z.shape[0], rank_b)
    M._cache[key] = ctx
    return ctx


def betti_numbers(M: SimplicialComplex) -> tuple[int, ...]:
    return tuple(homology_context(M, k).dim for k in range(M.n + 1))


# -- classes ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HomologyClass:
    representative: Chain
    coords: tuple[int, ...]

    @property
    def complex(self) -> SimplicialComplex:
        return self.representative.complex

    @property
    def k(self) -> int:
        return self.representative.k

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, HomologyClass)
            and other.complex is self.complex
            and other.k == self.k
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash(("H", self.k, self.coords))

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        return homology_class(self.representative + other.representative)

    def __repr__(self) -> str:
        return f"HomologyClass(k={self.k}, coords={self.coords})"


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    representative: Cochain
    coords: tuple[int, ...]

    @property
    def complex(self) -> SimplicialComplex:
        return self.representative.complex

    @property
    def k(self) -> int:
        return self.representative.k

    def is_zero(self) -> bool:
        return not any(self.coords)

    def coords_int(self) -> int:
        return sum(int(c) << i for i, c in enumerate(self.coords))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CohomologyClass)
            and other.complex is self.complex
            and other.k == self.k
            and other.coords == self.coords
        )

    def __hash__(self):
        return hash(("H^", self.k, self.coords))

    def __add__(self, other: "CohomologyClass") -> "CohomologyClass":
        return cohomology_class(self.representative + other.representative)

    def __repr__(self) -> str:
        return f"CohomologyClass(k={self.k}, coords={self.coords})"


def homology_class(z: Chain) -> HomologyClass:
    if not z.is_cycle():
        raise ValueError("chain is not a cycle")
    ctx = homology_context(z.complex, z.k)
    return HomologyClass(z, tuple(int(c) for c in ctx.homology_coords(z.bits)))


def cohomology_class(c: Cochain) -> CohomologyClass:
    if not isinstance(c, Cochain):
        c = Cochain(c.complex, c.k, c.bits)
    if not c.is_cocycle():
        raise ValueError("cochain is not a cocycle")
    ctx = homology_context(c.complex, c.k)
    return CohomologyClass(c, tuple(int(x) for x in ctx.cohomology_coords(c.bits)))


def homology_class_from_coords(M: SimplicialComplex, k: int, coords) -> HomologyClass:
    ctx = homology_context(M, k)
    coords = tuple(int(c) & 1 for c in coords)
    if len(coords) != ctx.dim:
        raise ValueError(f"H_{k} has dimension {ctx.dim}, got {len(coords)} coordinates")
    return HomologyClass(Chain(M, k, ctx.cycle_from_coords(coords)), coords)


def cohomology_class_from_coords(M: SimplicialComplex, k: int, coords) -> CohomologyClass:
    ctx = homology_context(M, k)
    coords = tuple(int(c) & 1 for c in coords)
    if len(coords) != ctx.dim:
        raise ValueError(f"H^{k} has dimension {ctx.dim}, got {len(coords)} coordinates")
    return CohomologyClass(Cochain(M, k, ctx.cocycle_from_coords(coords)), coords)


def homology_basis(M: SimplicialComplex, k: int) -> list[HomologyClass]:
    ctx = homology_context(M, k)
    return [homology_class_from_coords(M, k, np.eye(ctx.dim, dtype=int)[i]) for i in range(ctx.dim)]


def cohomology_basis(M: SimplicialComplex, k: int) -> list[CohomologyClass]:
    ctx = homology_context(M, k)
    return [cohomology_class_from_coords(M, k, np.eye(ctx.dim, dtype=int)[i]) for i in range(ctx.dim)]


def nonzero_cohomology_classes(M: SimplicialComplex, k: int) -> list[CohomologyClass]:
    h = homology_context(M, k).dim
    return [
        cohomology_class_from_coords(M, k, [(t >> i) & 1 for i in range(h)])
        for t in range(1, 1 << h)
    ]


def evaluate(alpha: Union[CohomologyClass, Cochain], z: Union[HomologyClass, Chain]) -> int:
    """The Kronecker pairing; 1 means ``z`` is detected by ``alpha``."""
    a = alpha.representative if isinstance(alpha, CohomologyClass) else alpha
    c = z.representative if isinstance(z, HomologyClass) else z
    if a.k != c.k:
        raise ValueError(f"cannot pair a degree-{a.k} cochain with a degree-{c.k} chain")
    if a.complex is not c.complex:
        raise ValueError("cochain and chain live on different complexes")
    value = int(np.bitwise_and(a.bits, c.bits).sum() & 1)
    if isinstance(alpha, CohomologyClass) and isinstance(z, HomologyClass):
        assert value == sum(x & y for x, y in zip(alpha.coords, z.coords)) % 2
    return value


# -- cup products -------------------------------------------------------------------


def _aw_indices(M: SimplicialComplex, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    key = ("aw", p, q)
    if key not in M._cache:
        S = M.simplices(p + q).tolist()
        front = np.array([M._index[p][tuple(s[: p + 1])] for s in S], dtype=np.int64)
        back = np.array([M._index[q][tuple(s[p:])] for s in S], dtype=np.int64)
        M._cache[key] = (front, back)
    return M._cache[key]


def cup_cochain(a: Cochain, b: Cochain) -> Cochain:
    """Alexander–Whitney product using the vertex order fixed at build time."""
    M = a.complex
    if b.complex is not M:
        raise ValueError("cochains live on different complexes")
    if a.k + b.k > M.n:
        raise ValueError(f"cup product degree {a.k + b.k} exceeds dimension {M.n}")
    front, back = _aw_indices(M, a.k, b.k)
    return Cochain(M, a.k + b.k, a.bits[front] & b.bits[back])


def cup_product(alpha: CohomologyClass, beta: CohomologyClass) -> CohomologyClass:
    return cohomology_class(cup_cochain(alpha.representative, beta.representative))


# -- duality --------------------------------------------------------------------------


def fundamental_class(M: SimplicialComplex) -> HomologyClass:
    if not is_closed_pseudomanifold(M):
        raise ValueError("fundamental class needs a closed pseudomanifold")
    z = Chain(M, M.n, np.ones(M.vol, dtype=np.uint8))
    cls = homology_class(z)
    if cls.is_zero():
        raise AssertionError("sum of top simplices is a boundary")
    return cls


def pairing_matrix(M: SimplicialComplex, k: int) -> np.ndarray:
    """Entry (i, j) is (alpha_i cup beta_j)[M] over the H^k and H^{n-k} bases."""
    fund = fundamental_class(M)
    A = cohomology_basis(M, k)
    B = cohomology_basis(M, M.n - k)
    Q = np.zeros((len(A), len(B)), dtype=np.uint8)
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            Q[i, j] = evaluate(cup_cochain(a.representative, b.representative), fund.representative)
    return Q


def _check_nondegenerate(M: SimplicialComplex, k: int) -> np.ndarray:
    Q = pairing_matrix(M, k)
    r = BinaryMatrix(Q).rank() if Q.size else 0
    if Q.shape[0] != Q.shape[1] or r != Q.shape[0]:
        raise DegeneratePairingError(k, Q.shape, r)
    return Q


def poincare_dual(M: SimplicialComplex, alpha: CohomologyClass) -> HomologyClass:
    """The class alpha* with beta(alpha*) = (alpha cup beta)[M] for every beta."""
    if not is_closed_pseudomanifold(M):
        raise DegeneratePairingError(alpha.k, (0, 0), 0)
    _check_nondegenerate(M, alpha.k)
    fund = fundamental_class(M)
    basis = cohomology_basis(M, M.n - alpha.k)
    coords = [evaluate(cup_cochain(alpha.representative, b.representative), fund.representative) for b in basis]
    dual = homology_class_from_coords(M, M.n - alpha.k, coords)
    for b, c in zip(basis, coords):
        assert evaluate(b, dual) == c
    return dual


def class_with_dual(M: SimplicialComplex, a: HomologyClass) -> CohomologyClass:
    """Inverse Poincaré duality: the cohomology class whose dual is ``a``."""
    k = M.n - a.k
    if not is_closed_pseudomanifold(M):
        raise DegeneratePairingError(k, (0, 0), 0)
    Q = _check_nondegenerate(M, k)
    c = BinaryMatrix(Q.T).solve(np.asarray(a.coords, dtype=np.uint8))
    alpha = cohomology_class_from_coords(M, k, c)
    assert poincare_dual(M, alpha) == a
    return alpha


# -- complement of a subcomplex ----------------------------------------------------------


class ComplementModel:
    """Barycentric-subdivision data for testing classes on ``|M| - |H|``.

    The open complement of a subcomplex H deformation retracts to the full
    subcomplex of Sd(M) spanned by barycentres of simplices not in H. Cochains
    of M are pulled back along the last-vertex map Sd(M) -> M.
    """

    def __init__(self, M: SimplicialComplex):
        self.M = M
        self.offsets = global_offsets(M)
        self.sd, _ = barycentric_subdivision(M)
        total = int(self.offsets[-1])
        self.dims = np.repeat(np.arange(M.n + 1), np.diff(self.offsets))
        self.last_vertex = np.concatenate([M.simplices(j)[:, -1] for j in range(M.n + 1)]) if total else np.zeros(0, np.int64)
        self._images: dict[int, np.ndarray] = {}

    @classmethod
    def of(cls, M: SimplicialComplex) -> "ComplementModel":
        if "complement" not in M._cache:
            M._cache["complement"] = cls(M)
        return M._cache["complement"]

    @property
    def num_nodes(self) -> int:
        return int(self.offsets[-1])

    def image(self, j: int) -> np.ndarray:
        """For each j-simplex of Sd(M), the j-simplex of M it maps onto, or -1."""
        if j not in self._images:
            flags = self.sd.simplices(j)
            lasts = self.last_vertex[flags] if flags.size else np.zeros((0, j + 1), np.int64)
            out = np.full(flags.shape[0], -1, dtype=np.int64)
            idx = self.M._index[j] if j <= self.M.n else {}
            rows = lasts.tolist()
            for r, verts in enumerate(rows):
                if all(a < b for a, b in zip(verts, verts[1:])):
                    out[r] = idx[tuple(verts)]
            self._images[j] = out
        return self._images[j]

    def pullback(self, bits: np.ndarray, j: int) -> np.ndarray:
        img = self.image(j)
        out = np.zeros(img.shape[0], dtype=np.uint8)
        ok = img >= 0
        out[ok] = bits[img[ok]]
        return out

    def edge_arrays(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        E = self.sd.simplices(1)
        return E[:, 0].copy(), E[:, 1].copy(), self.pullback(bits, 1).astype(np.int64)

    def alive_mask(self, H: Subcomplex) -> np.ndarray:
        return ~np.concatenate(H.masks) if self.num_nodes else np.zeros(0, dtype=bool)


def as_subcomplex(M: SimplicialComplex, H) -> Subcomplex:
    if isinstance(H, Subcomplex):
        if H.parent is not M:
            raise ValueError("H is a subcomplex of a different complex")
        if not H.is_closed():
            raise ValueError("H is not closed under taking faces")
        return H
    if isinstance(H, SimplicialComplex):
        return Subcomplex.from_complex(M, H)
    return Subcomplex.from_simplices(M, H)


def restricts_to_zero_on_complement(M: SimplicialComplex, H, alpha: Union[CohomologyClass, Cochain], method: str = "auto") -> bool:
    """True iff ``alpha`` vanishes on the open complement ``|M| - |H|``.

    ``method`` is ``"graph"`` (parity union-find, degree 1 only), ``"linear"``
    (GF(2) solve) or ``"auto"``.
    """
    H = as_subcomplex(M, H)
    a = alpha.representative if isinstance(alpha, CohomologyClass) else alpha
    k = a.k
    model = ComplementModel.of(M)
    alive = model.alive_mask(H)
    if method == "auto":
        method = "graph" if k == 1 else "linear"
    if method == "graph":
        if k != 1:
            raise ValueError("graph method handles degree-1 classes only")
        eu, ev, val = model.edge_arrays(a.bits)
        return bool(kernels.parity_consistent(model.num_nodes, eu, ev, val, alive))
    if method != "linear":
        raise ValueError(f"unknown method {method!r}")
    sd = model.sd
    top = sd.simplices(k)
    cols = np.flatnonzero(alive[top].all(axis=1)) if top.size else np.zeros(0, np.int64)
    rhs = model.pullback(a.bits, k)[cols]
    if not rhs.any():
        return True
    if k == 0:
        return False
    low = sd.simplices(k - 1)
    rows = np.flatnonzero(alive[low].all(axis=1))
    D = sd.boundary_dense(k)[np.ix_(rows, cols)]
    return BinaryMatrix(D.T).solve(rhs) is not None


def restriction_is_zero(M: SimplicialComplex, H, beta: Union[CohomologyClass, Cochain]) -> bool:
    """True iff ``beta`` restricted to the subcomplex ``H`` is a coboundary there."""
    H = as_subcomplex(M, H)
    b = beta.representative if isinstance(beta, CohomologyClass) else beta
    j = b.k
    cols = H.indices(j)
    rhs = b.bits[cols]
    if not rhs.any():
        return True
    if j == 0:
        return False
    rows = H.indices(j - 1)
    D = M.boundary_dense(j)[np.ix_(rows, cols)]
    return BinaryMatrix(D.T).solve(rhs) is not None
