"""Finite abstract simplicial complexes and their mod-2 chains."""
from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .gf2 import BinaryMatrix

log = logging.getLogger(__name__)

Simplex = tuple[int, ...]


def canonical_simplex(vertices: Iterable[int]) -> Simplex:
    """Sort a vertex list into canonical form, rejecting repeats and negatives."""
    vs = tuple(sorted(int(v) for v in vertices))
    if not vs:
        raise ValueError("a simplex needs at least one vertex")
    if vs[0] < 0:
        raise ValueError(f"vertex identifiers must be non-negative, got {vs}")
    if any(a == b for a, b in zip(vs, vs[1:])):
        raise ValueError(f"repeated vertex in simplex {vs}")
    return vs


class SimplicialComplex:
    """A complex given by its maximal simplices, with the full face lattice.

    Simplices of each dimension are stored in lexicographic order; that order
    indexes chains, cochains and boundary matrices. Instances are immutable;
    derived structures are cached on first use.
    """

    def __init__(self, maximal: Sequence[Simplex], n: int, build_log: Sequence[str] = ()):
        self.n = int(n)
        self.maximal_simplices: tuple[Simplex, ...] = tuple(sorted(tuple(int(v) for v in s) for s in maximal))
        self.build_log: tuple[str, ...] = tuple(build_log)
        faces: list[set[Simplex]] = [set() for _ in range(self.n + 1)]
        for s in self.maximal_simplices:
            for j in range(len(s)):
                faces[j].update(itertools.combinations(s, j + 1))
        self._simplices = []
        self._index = []
        for j in range(self.n + 1):
            ordered = sorted(faces[j])
            arr = np.array(ordered, dtype=np.int64).reshape(len(ordered), j + 1)
            self._simplices.append(arr)
            self._index.append({s: i for i, s in enumerate(ordered)})
        self.is_pure = all(len(s) == self.n + 1 for s in self.maximal_simplices)
        self._cache: dict = {}

    # -- basic access -----------------------------------------------------

    @property
    def vertices(self) -> np.ndarray:
        return self._simplices[0][:, 0]

    @property
    def num_vertices(self) -> int:
        return self.count(0)

    @property
    def dim(self) -> int:
        """Largest dimension that actually occurs (-1 for the empty complex)."""
        return max((len(s) - 1 for s in self.maximal_simplices), default=-1)

    @property
    def vol(self) -> int:
        """Number of top-dimensional simplices."""
        return self.count(self.n)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(self.count(j) for j in range(self.n + 1))

    def count(self, j: int) -> int:
        if j < 0 or j > self.n:
            return 0
        return self._simplices[j].shape[0]

    def simplices(self, j: int) -> np.ndarray:
        """``(f_j, j+1)`` array of vertex ids in canonical order."""
        if j < 0 or j > self.n:
            return np.zeros((0, max(j + 1, 0)), dtype=np.int64)
        return self._simplices[j]

    def simplex(self, j: int, i: int) -> Simplex:
        return tuple(int(v) for v in self._simplices[j][i])

    def index(self, simplex: Iterable[int]) -> int:
        """Position of ``simplex`` in the canonical order of its dimension."""
        s = tuple(sorted(int(v) for v in simplex))
        try:
            return self._index[len(s) - 1][s]
        except (IndexError, KeyError):
            raise KeyError(f"{s} is not a simplex of this complex") from None

    def __contains__(self, simplex) -> bool:
        if isinstance(simplex, (int, np.integer)):
            simplex = (simplex,)
        s = tuple(sorted(int(v) for v in simplex))
        return 0 < len(s) <= self.n + 1 and s in self._index[len(s) - 1]

    def euler_characteristic(self) -> int:
        return sum((-1) ** j * self.count(j) for j in range(self.n + 1))

    def vertex_positions(self, ids) -> np.ndarray:
        """Map vertex ids to positions in ``vertices`` (vectorised)."""
        ids = np.asarray(ids, dtype=np.int64)
        pos = np.searchsorted(self.vertices, ids)
        if ids.size and (np.any(pos >= self.num_vertices) or np.any(self.vertices[np.minimum(pos, self.num_vertices - 1)] != ids)):
            raise KeyError("unknown vertex id")
        return pos

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, f={self.f_vector})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.n == other.n
            and self.maximal_simplices == other.maximal_simplices
        )

    def __hash__(self) -> int:
        return hash((self.n, self.maximal_simplices))

    # -- incidence ----------------------------------------------------------

    def facets(self, k: int) -> np.ndarray:
        """``(f_k, k+1)`` indices of (k-1)-faces; column ``i`` omits vertex ``i``."""
        key = ("facets", k)
        if key not in self._cache:
            S = self.simplices(k)
            out = np.zeros((S.shape[0], k + 1), dtype=np.int64)
            if k >= 1:
                idx = self._index[k - 1]
                for i in range(k + 1):
                    face = np.delete(S, i, axis=1)
                    out[:, i] = [idx[tuple(r)] for r in face.tolist()]
            self._cache[key] = out
        return self._cache[key]

    def cofaces(self, j: int) -> tuple[np.ndarray, np.ndarray]:
        """CSR ``(indptr, indices)``: for each j-simplex, the (j+1)-simplices containing it."""
        key = ("cofaces", j)
        if key not in self._cache:
            F = self.facets(j + 1) if j + 1 <= self.n else np.zeros((0, j + 2), dtype=np.int64)
            rows = F.ravel()
            cols = np.repeat(np.arange(F.shape[0]), F.shape[1])
            order = np.lexsort((cols, rows))
            counts = np.bincount(rows, minlength=self.count(j))
            indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
            self._cache[key] = (indptr, cols[order].astype(np.int64))
        return self._cache[key]

    def coface_counts(self, j: int) -> np.ndarray:
        indptr, _ = self.cofaces(j)
        return np.diff(indptr)

    def boundary_dense(self, k: int) -> np.ndarray:
        """Matrix of the boundary map C_k -> C_{k-1}; zero-sized outside 0..n+1."""
        rows, cols = self.count(k - 1), self.count(k)
        D = np.zeros((rows, cols), dtype=np.uint8)
        if 1 <= k <= self.n and cols:
            F = self.facets(k)
            D[F.ravel(), np.repeat(np.arange(cols), k + 1)] = 1
        return D

    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """1-skeleton CSR over vertex positions: ``(indptr, neighbours, edge_index)``."""
        if "adj" not in self._cache:
            V = self.num_vertices
            E = self.simplices(1)
            if E.shape[0]:
                ends = self.vertex_positions(E.ravel()).reshape(-1, 2)
            else:
                ends = np.zeros((0, 2), dtype=np.int64)
            eid = np.arange(ends.shape[0])
            src = np.concatenate([ends[:, 0], ends[:, 1]])
            dst = np.concatenate([ends[:, 1], ends[:, 0]])
            ids = np.concatenate([eid, eid])
            order = np.lexsort((dst, src))
            counts = np.bincount(src, minlength=V)
            indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
            self._cache["adj"] = (indptr, dst[order].astype(np.int64), ids[order].astype(np.int64))
        return self._cache["adj"]

    def skeleton(self, j: int) -> "Subcomplex":
        return Subcomplex.skeleton(self, j)

    def full(self) -> "Subcomplex":
        return Subcomplex.skeleton(self, self.n)


# -- construction ---------------------------------------------------------------


def build_complex(maximal_simplices: Iterable[Iterable[int]], n: int) -> SimplicialComplex:
    """Canonicalise a list of simplices into a complex of top dimension ``n``.

    Duplicates and simplices that are faces of other listed simplices are
    dropped and recorded in ``build_log``. Non-pure input is accepted with
    ``is_pure = False``.
    """
    raw = [canonical_simplex(s) for s in maximal_simplices]
    if not raw:
        raise ValueError("cannot build a complex from an empty simplex list")
    if n < 0:
        raise ValueError("top dimension must be non-negative")
    for s in raw:
        if len(s) > n + 1:
            raise ValueError(f"simplex {s} has dimension {len(s) - 1} > n = {n}")
    notes = []
    unique = sorted(set(raw))
    if len(unique) < len(raw):
        notes.append(f"dropped {len(raw) - len(unique)} duplicate simplices")
    proper_faces: set[Simplex] = set()
    for s in unique:
        for j in range(1, len(s)):
            proper_faces.update(itertools.combinations(s, j))
    maximal = [s for s in unique if s not in proper_faces]
    for s in unique:
        if s in proper_faces:
            notes.append(f"dropped {s}: face of another listed simplex")
    if any(len(s) != n + 1 for s in maximal):
        notes.append("complex is not pure: some maximal simplex has dimension < n")
    for note in notes:
        log.debug(note)
    return SimplicialComplex(maximal, n, notes)


def empty_complex(n: int) -> SimplicialComplex:
    return SimplicialComplex((), n)


def boundary_matrix(M: SimplicialComplex, k: int) -> BinaryMatrix:
    """Mod-2 boundary operator from k-chains to (k-1)-chains."""
    if not 1 <= k <= M.n:
        raise ValueError(f"boundary degree k={k} outside 1..{M.n}")
    return BinaryMatrix(M.boundary_dense(k))


def is_closed_pseudomanifold(M: SimplicialComplex) -> bool:
    """Pure, every (n-1)-simplex in exactly two n-simplices, connected dual graph."""
    if not M.is_pure or M.vol == 0:
        return False
    if M.n == 0:
        return M.vol == 1
    counts = M.coface_counts(M.n - 1)
    if not np.all(counts == 2):
        return False
    indptr, tops = M.cofaces(M.n - 1)
    pairs = tops.reshape(-1, 2)
    g = csr_matrix((np.ones(pairs.shape[0]), (pairs[:, 0], pairs[:, 1])), shape=(M.vol, M.vol))
    ncomp, _ = connected_components(g, directed=False)
    return ncomp == 1


def barycentric_subdivision(M: SimplicialComplex) -> tuple[SimplicialComplex, dict[int, Simplex]]:
    """First barycentric subdivision.

    The barycentre of a j-simplex with canonical index ``i`` becomes vertex
    ``offset[j] + i`` (offsets ordered by dimension), so vertex order in the
    subdivision lists lower-dimensional barycentres first and every flag is
    written in increasing dimension. Returns the subdivision and the map from
    barycentre vertex to original simplex.
    """
    offsets = global_offsets(M)
    tops = []
    for s in M.maximal_simplices:
        for perm in itertools.permutations(s):
            flag = []
            for j in range(1, len(perm) + 1):
                face = tuple(sorted(perm[:j]))
                flag.append(offsets[j - 1] + M.index(face))
            tops.append(tuple(flag))
    vertex_map = {}
    for j in range(M.n + 1):
        for i in range(M.count(j)):
            vertex_map[int(offsets[j] + i)] = M.simplex(j, i)
    if not tops:
        return empty_complex(M.n), vertex_map
    S = SimplicialComplex(sorted(set(tops)), M.n)
    return S, vertex_map


def global_offsets(M: SimplicialComplex) -> np.ndarray:
    """Start of each dimension in the global (dimension-major) simplex numbering."""
    return np.concatenate([[0], np.cumsum([M.count(j) for j in range(M.n + 1)])]).astype(np.int64)


def subdivision_volume_factor(n: int) -> int:
    return factorial(n + 1)


# -- subcomplexes -----------------------------------------------------------------


class Subcomplex:
    """A set of simplices of a parent complex, stored as per-dimension masks.

    Not necessarily closed under faces unless built through ``closure``;
    constructors in this package always return closed subcomplexes.
    """

    __slots__ = ("parent", "masks")

    def __init__(self, parent: SimplicialComplex, masks: Sequence[np.ndarray]):
        self.parent = parent
        self.masks = tuple(np.asarray(m, dtype=bool) for m in masks)
        if len(self.masks) != parent.n + 1:
            raise ValueError("need one mask per dimension 0..n")

    @classmethod
    def empty(cls, parent: SimplicialComplex) -> "Subcomplex":
        return cls(parent, [np.zeros(parent.count(j), dtype=bool) for j in range(parent.n + 1)])

    @classmethod
    def skeleton(cls, parent: SimplicialComplex, j: int) -> "Subcomplex":
        return cls(parent, [np.full(parent.count(i), i <= j, dtype=bool) for i in range(parent.n + 1)])

    @classmethod
    def from_simplices(cls, parent: SimplicialComplex, simplices: Iterable[Iterable[int]]) -> "Subcomplex":
        """Smallest subcomplex containing ``simplices``; each must lie in ``parent``."""
        sub = cls.empty(parent)
        for s in simplices:
            s = canonical_simplex(s)
            if s not in parent:
                raise ValueError(f"{s} is not a simplex of the ambient complex")
            sub.masks[len(s) - 1][parent.index(s)] = True
        return sub.closure()

    @classmethod
    def from_indices(cls, parent: SimplicialComplex, j: int, indices) -> "Subcomplex":
        sub = cls.empty(parent)
        sub.masks[j][np.asarray(indices, dtype=np.int64)] = True
        return sub.closure()

    @classmethod
    def from_complex(cls, parent: SimplicialComplex, K: SimplicialComplex) -> "Subcomplex":
        return cls.from_simplices(parent, K.maximal_simplices)

    def closure(self) -> "Subcomplex":
        masks = [m.copy() for m in self.masks]
        for j in range(self.parent.n, 0, -1):
            if masks[j].any():
                F = self.parent.facets(j)[masks[j]]
                masks[j - 1][F.ravel()] = True
        return Subcomplex(self.parent, masks)

    def is_closed(self) -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.masks, self.closure().masks))

    @property
    def dim(self) -> int:
        for j in range(self.parent.n, -1, -1):
            if self.masks[j].any():
                return j
        return -1

    def count(self, j: int) -> int:
        if j < 0 or j > self.parent.n:
            return 0
        return int(self.masks[j].sum())

    def indices(self, j: int) -> np.ndarray:
        return np.flatnonzero(self.masks[j])

    def simplices(self, j: int) -> list[Simplex]:
        return [self.parent.simplex(j, i) for i in self.indices(j)]

    def all_simplices(self) -> list[Simplex]:
        return [s for j in range(self.parent.n + 1) for s in self.simplices(j)]

    def vertex_ids(self) -> np.ndarray:
        return self.parent.simplices(0)[self.masks[0], 0]

    def is_empty(self) -> bool:
        return not any(m.any() for m in self.masks)

    def __contains__(self, simplex) -> bool:
        if isinstance(simplex, (int, np.integer)):
            simplex = (simplex,)
        s = canonical_simplex(simplex)
        if s not in self.parent:
            return False
        return bool(self.masks[len(s) - 1][self.parent.index(s)])

    def __len__(self) -> int:
        return sum(int(m.sum()) for m in self.masks)

    def __or__(self, other: "Subcomplex") -> "Subcomplex":
        self._same_parent(other)
        return Subcomplex(self.parent, [a | b for a, b in zip(self.masks, other.masks)])

    def __and__(self, other: "Subcomplex") -> "Subcomplex":
        self._same_parent(other)
        return Subcomplex(self.parent, [a & b for a, b in zip(self.masks, other.masks)])

    def minus(self, other: "Subcomplex") -> "Subcomplex":
        """Simplices of ``self`` not in ``other`` (generally not closed)."""
        self._same_parent(other)
        return Subcomplex(self.parent, [a & ~b for a, b in zip(self.masks, other.masks)])

    def issubset(self, other: "Subcomplex") -> bool:
        self._same_parent(other)
        return all(not np.any(a & ~b) for a, b in zip(self.masks, other.masks))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subcomplex)
            and other.parent is self.parent
            and all(np.array_equal(a, b) for a, b in zip(self.masks, other.masks))
        )

    def __repr__(self) -> str:
        return f"Subcomplex(f={tuple(self.count(j) for j in range(self.parent.n + 1))})"

    def maximal_simplices(self) -> list[Simplex]:
        out = []
        covered = [np.zeros_like(m) for m in self.masks]
        for j in range(self.parent.n, -1, -1):
            live = self.masks[j] & ~covered[j]
            out.extend(self.parent.simplex(j, i) for i in np.flatnonzero(live))
            above = self.masks[j] | covered[j]
            if j >= 1 and above.any():
                covered[j - 1][self.parent.facets(j)[above].ravel()] = True
        return sorted(out)

    def to_complex(self) -> SimplicialComplex:
        """Materialise as a standalone complex (same vertex ids, same ``n``)."""
        return SimplicialComplex(self.maximal_simplices(), self.parent.n)

    def _same_parent(self, other: "Subcomplex"):
        if other.parent is not self.parent:
            raise ValueError("subcomplexes of different complexes")


# -- chains -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Chain:
    """A mod-2 k-chain: a 0/1 vector over the canonical k-simplex order."""

    complex: SimplicialComplex
    k: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8) & 1
        if bits.shape != (self.complex.count(self.k),):
            raise ValueError(f"{type(self).__name__} of degree {self.k} needs {self.complex.count(self.k)} entries")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def zero(cls, M: SimplicialComplex, k: int):
        return cls(M, k, np.zeros(M.count(k), dtype=np.uint8))

    @classmethod
    def from_simplices(cls, M: SimplicialComplex, k: int, simplices: Iterable[Iterable[int]]):
        bits = np.zeros(M.count(k), dtype=np.uint8)
        for s in simplices:
            s = canonical_simplex(s)
            if len(s) != k + 1:
                raise ValueError(f"{s} is not a {k}-simplex")
            if s not in M:
                raise ValueError(f"{s} is not a simplex of the complex")
            bits[M.index(s)] ^= 1
        return cls(M, k, bits)

    @classmethod
    def from_indices(cls, M: SimplicialComplex, k: int, indices):
        bits = np.zeros(M.count(k), dtype=np.uint8)
        np.bitwise_xor.at(bits, np.asarray(indices, dtype=np.int64), 1)
        return cls(M, k, bits)

    @property
    def weight(self) -> int:
        return int(self.bits.sum())

    @property
    def support(self) -> list[Simplex]:
        return [self.complex.simplex(self.k, i) for i in np.flatnonzero(self.bits)]

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def is_zero(self) -> bool:
        return not self.bits.any()

    def __add__(self, other):
        if type(other) is not type(self) or other.complex is not self.complex or other.k != self.k:
            raise ValueError("can only add chains of the same degree on the same complex")
        return type(self)(self.complex, self.k, self.bits ^ other.bits)

    def __eq__(self, other) -> bool:
        return (
            type(other) is type(self)
            and other.complex is self.complex
            and other.k == self.k
            and np.array_equal(other.bits, self.bits)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.k, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(k={self.k}, weight={self.weight})"

    def boundary(self) -> "Chain":
        if self.k == 0:
            return Chain(self.complex, -1, np.zeros(0, dtype=np.uint8))
        D = self.complex.boundary_dense(self.k)
        return Chain(self.complex, self.k - 1, (D.astype(np.int64) @ self.bits) % 2)

    def is_cycle(self) -> bool:
        return self.k == 0 or not self.boundary().bits.any()


@dataclass(frozen=True, eq=False)
class Cochain(Chain):
    """A mod-2 k-cochain: the k-simplices on which it takes the value 1."""

    def coboundary(self) -> "Cochain":
        D = self.complex.boundary_dense(self.k + 1)
        return Cochain(self.complex, self.k + 1, (D.T.astype(np.int64) @ self.bits) % 2)

    def is_cocycle(self) -> bool:
        return self.k >= self.complex.n or not self.coboundary().bits.any()

    def __call__(self, chain: Chain) -> int:
        if chain.k != self.k:
            raise ValueError("degree mismatch")
        return int(np.bitwise_and(self.bits, chain.bits).sum() & 1)


# -- JSON format ------------------------------------------------------------------


def complex_to_dict(M: SimplicialComplex) -> dict:
    return {"n": M.n, "maximal_simplices": [list(s) for s in M.maximal_simplices]}


def complex_from_dict(data: dict) -> SimplicialComplex:
    try:
        n = int(data["n"])
        simplices = data["maximal_simplices"]
    except (KeyError, TypeError) as exc:
        raise ValueError("complex JSON needs 'n' and 'maximal_simplices'") from exc
    return build_complex(simplices, n)


def dumps_complex(M: SimplicialComplex) -> str:
    return json.dumps(complex_to_dict(M), separators=(",", ":")) + "\n"


def save_complex(M: SimplicialComplex, path) -> None:
    Path(path).write_text(dumps_complex(M))


def load_complex(path) -> SimplicialComplex:
    return complex_from_dict(json.loads(Path(path).read_text()))
