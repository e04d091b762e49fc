"""Systolic invariants and the cutting constructions."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .complex import Chain, Cochain, SimplicialComplex, Subcomplex
from .errors import DegeneratePairingError, LemmaViolation
from .homology import (
    CohomologyClass,
    ComplementModel,
    HomologyClass,
    as_subcomplex,
    evaluate,
    homology_class,
    homology_context,
    poincare_dual,
    restricts_to_zero_on_complement,
)
from .metric import ball, h_volume
from .minweight import (
    Budget,
    CycleProblem,
    accept_class,
    accept_detected,
    accept_nonzero,
    cover_csr,
    cover_walk,
    min_weight,
)


@dataclass
class MinWeightResult:
    """A minimiser plus how much we trust it.

    ``certified`` is True only when an exact engine finished. ``notes``
    records anything unusual about the instance.
    """

    weight: int
    certified: bool
    method: str
    chain: Chain | None = None
    subcomplex: Subcomplex | None = None
    loop: list[int] | None = None
    notes: tuple[str, ...] = ()


# -- problems ------------------------------------------------------------------------------


def homology_problem(M: SimplicialComplex, k: int) -> CycleProblem:
    key = ("hprob", k)
    if key not in M._cache:
        ctx = homology_context(M, k)
        M._cache[key] = CycleProblem(M.boundary_dense(k), M.boundary_dense(k + 1), ctx.cocycles, ctx.cycles)
    return M._cache[key]


def cohomology_problem(M: SimplicialComplex, k: int) -> CycleProblem:
    key = ("cprob", k)
    if key not in M._cache:
        ctx = homology_context(M, k)
        M._cache[key] = CycleProblem(M.boundary_dense(k + 1).T.copy(), M.boundary_dense(k).T.copy(), ctx.cycles, ctx.cocycles)
    return M._cache[key]


def _coords_int(coords) -> int:
    return sum(int(c) << i for i, c in enumerate(coords))


def min_weight_in_class(M: SimplicialComplex, a: HomologyClass, budget: Budget | None = None, method: str = "auto") -> MinWeightResult:
    """Lightest cycle homologous to ``a``."""
    if a.complex is not M:
        raise ValueError("class lives on a different complex")
    if a.is_zero():
        return MinWeightResult(0, True, "zero", Chain.zero(M, a.k))
    prob = homology_problem(M, a.k)
    sol = min_weight(prob, accept_class(prob.h, _coords_int(a.coords)), budget, method)
    chain = Chain(M, a.k, sol.bits)
    if homology_class(chain) != a:
        raise AssertionError("minimiser left the requested class")
    return MinWeightResult(sol.weight, sol.certified, sol.method, chain)


def systole(M: SimplicialComplex, k: int, budget: Budget | None = None, method: str = "auto") -> MinWeightResult:
    """``sys_k``: lightest nontrivial k-cycle."""
    prob = homology_problem(M, k)
    if prob.h == 0:
        raise ValueError(f"H_{k} is trivial")
    sol = min_weight(prob, accept_nonzero(prob.h), budget, method)
    chain = Chain(M, k, sol.bits)
    if homology_class(chain).is_zero():
        raise AssertionError("systolic cycle is a boundary")
    return MinWeightResult(sol.weight, sol.certified, sol.method, chain)


def cosystole(M: SimplicialComplex, k: int, budget: Budget | None = None, method: str = "auto") -> MinWeightResult:
    """Lightest cocycle that is not a coboundary."""
    prob = cohomology_problem(M, k)
    if prob.h == 0:
        raise ValueError(f"H^{k} is trivial")
    sol = min_weight(prob, accept_nonzero(prob.h), budget, method)
    return MinWeightResult(sol.weight, sol.certified, sol.method, Cochain(M, k, sol.bits))


def _check_alpha(M: SimplicialComplex, alpha: CohomologyClass):
    if alpha.complex is not M:
        raise ValueError("class lives on a different complex")
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")


def sys_detected(M: SimplicialComplex, alpha: CohomologyClass, budget: Budget | None = None, method: str = "auto") -> MinWeightResult:
    """``sys^alpha``: lightest k-cycle on which ``alpha`` is 1."""
    _check_alpha(M, alpha)
    if alpha.k == 1 and method in ("auto", "double-cover"):
        return double_cover_shortest_loop(M, alpha)
    prob = homology_problem(M, alpha.k)
    sol = min_weight(prob, accept_detected(prob.h, alpha.coords_int()), budget, method)
    chain = Chain(M, alpha.k, sol.bits)
    if evaluate(alpha, chain) != 1:
        raise AssertionError("minimiser is not detected")
    return MinWeightResult(sol.weight, sol.certified, sol.method, chain)


def double_cover_shortest_loop(M: SimplicialComplex, alpha: CohomologyClass) -> MinWeightResult:
    """Shortest edge loop on which the degree-1 class ``alpha`` is odd.

    Lift to the double cover defined by a representing cocycle and take the
    shortest path between the two lifts of a vertex, minimised over vertices.
    """
    _check_alpha(M, alpha)
    if alpha.k != 1:
        raise ValueError("double cover search needs a degree-1 class")
    E = M.simplices(1)
    pos = M.vertex_positions(E.ravel()).reshape(E.shape)
    masks = alpha.representative.bits.astype(np.int64)
    indptr, indices, slot_edge = cover_csr(M.num_vertices, pos[:, 0].copy(), pos[:, 1].copy(), masks, 2)
    best, arg = kernels.fiber_distances(indptr, indices, M.num_vertices, 2)
    if best[1] < 0:
        raise AssertionError("nonzero class with no odd loop")
    v = int(arg[1])
    walk = cover_walk(indptr, indices, slot_edge, 2, v, 1)
    ids = M.vertices
    loop = [int(ids[v])] + [int(ids[b]) for _, b in walk]
    bits = np.zeros(M.count(1), dtype=np.uint8)
    for e, _ in walk:
        bits[e] ^= 1
    chain = Chain(M, 1, bits)
    if chain.weight != best[1] or evaluate(alpha, chain) != 1:
        raise AssertionError("double cover loop is not a shortest detected cycle")
    return MinWeightResult(int(best[1]), True, "double-cover", chain, loop=loop)


def brute_force_sys_detected(M: SimplicialComplex, alpha: CohomologyClass, budget: Budget | None = None) -> int:
    """Reference value: enumerate every detected class and its whole coset."""
    _check_alpha(M, alpha)
    prob = homology_problem(M, alpha.k)
    return min_weight(prob, accept_detected(prob.h, alpha.coords_int()), budget, "enumerate").weight


# -- cutting ---------------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CutComplex:
    """A subcomplex ``H`` whose complement kills a degree-``k`` class."""

    subcomplex: Subcomplex
    k: int

    @property
    def complex(self) -> SimplicialComplex:
        return self.subcomplex.parent

    @property
    def dim(self) -> int:
        return self.complex.n - self.k

    @property
    def area(self) -> int:
        return self.subcomplex.count(self.dim)

    def top_chain(self) -> Chain:
        return Chain.from_indices(self.complex, self.dim, self.subcomplex.indices(self.dim))


def cuts(M: SimplicialComplex, H, alpha: CohomologyClass) -> bool:
    return restricts_to_zero_on_complement(M, H, alpha)


def _augmented(M: SimplicialComplex, j: int, top: np.ndarray) -> Subcomplex:
    """``(j-1)``-skeleton plus the closure of the chosen j-simplices."""
    H = Subcomplex.skeleton(M, j - 1) if j >= 1 else Subcomplex.empty(M)
    return H | Subcomplex.from_indices(M, j, top)


def cut_alpha(M: SimplicialComplex, alpha: CohomologyClass, budget: Budget | None = None, method: str = "auto") -> MinWeightResult:
    """``cut^alpha``: fewest (n-k)-simplices in a subcomplex whose complement kills ``alpha``.

    ``dual`` minimises over cycles in the Poincaré dual class (closed
    pseudomanifolds with a perfect pairing); ``search`` scans subsets of
    (n-k)-simplices by size on top of the full (n-k-1)-skeleton.
    """
    _check_alpha(M, alpha)
    budget = budget or Budget()
    notes: list[str] = []
    if method in ("auto", "dual"):
        try:
            dual = poincare_dual(M, alpha)
        except DegeneratePairingError as exc:
            if method == "dual":
                raise
            notes.append(f"dual route unavailable: {exc}")
        else:
            res = min_weight_in_class(M, dual, budget)
            H = Subcomplex.from_indices(M, M.n - alpha.k, res.chain.indices())
            if cuts(M, H, alpha):
                return MinWeightResult(res.weight, res.certified, "dual:" + res.method, res.chain, H, notes=tuple(notes))
            if method == "dual":
                raise LemmaViolation("dual cut", "a cycle in the dual class fails to cut alpha")
            notes.append("dual cycle does not cut; falling back to search")
    elif method != "search":
        raise ValueError(f"unknown method {method!r}")
    res = _cut_search(M, alpha, budget)
    if res.weight == 0:
        notes.append("alpha already vanishes off the lower skeleton")
    res.notes = tuple(notes) + res.notes
    return res


def _cut_search(M: SimplicialComplex, alpha: CohomologyClass, budget: Budget) -> MinWeightResult:
    j = M.n - alpha.k
    N = M.count(j)
    deadline = budget.deadline()
    # greedy upper bound: drop simplices from the full j-skeleton while it still cuts
    keep = np.ones(N, dtype=bool)
    for s in range(N - 1, -1, -1):
        keep[s] = False
        if not cuts(M, _augmented(M, j, np.flatnonzero(keep)), alpha):
            keep[s] = True
    upper = np.flatnonzero(keep)
    cap = upper.size if budget.weight_cap is None else min(upper.size, budget.weight_cap)
    checks_left = budget.max_checks

    if alpha.k == 1:
        model = ComplementModel.of(M)
        eu, ev, val = model.edge_arrays(alpha.representative.bits)
        dims = model.dims
        live = (dims[eu] >= j) & (dims[ev] >= j)
        if np.any(live & (dims[eu] > j) & (dims[ev] > j)):
            raise AssertionError("subdivision edge between two top simplices")
        eu, ev, val = eu[live], ev[live], val[live]
        n_nodes = model.num_nodes
        base_parent = np.arange(n_nodes, dtype=np.int64)
        base_parity = np.zeros(n_nodes, dtype=np.int64)
        cand = model.offsets[j] + np.arange(N, dtype=np.int64)
        for w in range(cap + 1):
            status, combo, checks = kernels.cut_search(base_parent, base_parity, cand, eu, ev, val, w, checks_left)
            checks_left -= checks
            if status == 1:
                return _cut_result(M, alpha, j, np.sort(combo), True)
            if status == 2 or checks_left <= 0 or (deadline is not None and time.monotonic() > deadline):
                break
    else:
        for w in range(cap + 1):
            for combo in itertools.combinations(range(N), w):
                checks_left -= 1
                if cuts(M, _augmented(M, j, np.asarray(combo, dtype=np.int64)), alpha):
                    return _cut_result(M, alpha, j, np.asarray(combo, dtype=np.int64), True)
                if checks_left <= 0 or (deadline is not None and checks_left % 256 == 0 and time.monotonic() > deadline):
                    break
            else:
                continue
            break
    return _cut_result(M, alpha, j, upper, upper.size == 0)


def _cut_result(M: SimplicialComplex, alpha: CohomologyClass, j: int, top: np.ndarray, certified: bool) -> MinWeightResult:
    H = _augmented(M, j, top)
    if not cuts(M, H, alpha):
        raise AssertionError("cut search returned a non-cutting complex")
    method = "search" if certified else "search:greedy-bound"
    return MinWeightResult(int(top.size), certified, method, Chain.from_indices(M, j, top), H)


def cut_and_paste(M: SimplicialComplex, H, alpha: CohomologyClass, x: int, r: int, R: int | None = None) -> CutComplex:
    """Replace the part of ``H`` inside ``B(x, r)`` by the sphere ``S(x, r)``.

    Needs a degree-1 class, ``H`` cutting ``alpha`` and ``r < (R - 1) / 2``
    where ``R = sys^alpha``. The result still cuts ``alpha``; this is
    re-checked and a violation raises.
    """
    _check_alpha(M, alpha)
    if alpha.k != 1:
        raise ValueError("cut-and-paste is implemented for degree-1 classes")
    H = as_subcomplex(M, H.subcomplex if isinstance(H, CutComplex) else H)
    if R is None:
        R = double_cover_shortest_loop(M, alpha).weight
    if not r < (R - 1) / 2:
        raise ValueError(f"radius {r} violates r < (R - 1) / 2 with R = {R}")
    if x not in H:
        raise ValueError(f"{x} is not a vertex of H")
    if not cuts(M, H, alpha):
        raise ValueError("H does not cut alpha")
    bs = ball(M, x, r)
    new = H.minus(bs.ball).closure() | bs.sphere
    if not cuts(M, new, alpha):
        raise LemmaViolation("cut-and-paste", f"H' fails to cut alpha at x={x}, r={r}")
    return CutComplex(new, 1)


# -- good balls -------------------------------------------------------------------------------


@dataclass(frozen=True)
class BallStep:
    radius: int
    h: int
    h_quarter: int
    ratio_bound: float
    ratio_ok: bool
    v_half: int | None = None
    direct_ok: bool | None = None


@dataclass(frozen=True)
class GoodBall:
    center: int
    radius: int
    h: int
    v_half: int
    bound: float
    trace: tuple[BallStep, ...]

    found = True


@dataclass(frozen=True)
class Exhausted:
    ladder: tuple[int, ...]
    trace: tuple[BallStep, ...]
    reason: str
    r_eps_ge_64: bool

    found = False


def radius_ladder(R: int, eps: float) -> list[int]:
    lo = R ** (1 - eps)
    out = []
    r = 1
    while r <= R:
        if r >= lo - 1e-12:
            out.append(r)
        r *= 4
    return out


def good_ball_search(M: SimplicialComplex, H, alpha: CohomologyClass, x: int, eps: float, R: int | None = None) -> GoodBall | Exhausted:
    """Look for a radius ``r`` in the ladder ``4^j in [R^(1-eps), R]`` with
    ``h(x, r) <= (4 / R^(1-eps)) v(x, r / 2)``.

    ``h`` counts (n-1)-simplices of ``H`` in the ball and ``v`` top simplices.
    A ladder rung is tried when ``h(x, r_i) <= (r_i / R^(1-eps)) h(x, r_i / 4)``;
    candidates are then checked directly.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    _check_alpha(M, alpha)
    H = as_subcomplex(M, H.subcomplex if isinstance(H, CutComplex) else H)
    if x not in H:
        raise ValueError(f"{x} is not a vertex of H")
    if R is None:
        R = sys_detected(M, alpha).weight
    lo = R ** (1 - eps)
    ladder = radius_ladder(R, eps)
    big = R ** eps >= 64
    if len(ladder) < 2:
        return Exhausted(tuple(ladder), (), "ladder has fewer than two radii", big)
    trace = []
    for r in ladder[1:]:
        hr = h_volume(H, ball(M, x, r))
        hq = h_volume(H, ball(M, x, r // 4))
        bound = r / lo
        ratio_ok = hr <= bound * hq + 1e-9
        if not ratio_ok:
            trace.append(BallStep(r, hr, hq, bound, False))
            continue
        vh = ball(M, x, r // 2).vol
        direct = hr <= (4 / lo) * vh + 1e-9
        trace.append(BallStep(r, hr, hq, bound, True, vh, direct))
        if direct:
            return GoodBall(int(x), r, hr, vh, (4 / lo) * vh, tuple(trace))
    return Exhausted(tuple(ladder), tuple(trace), "no rung passed both tests", big)


def ls_remark_holds(M: SimplicialComplex, H, alpha: CohomologyClass, beta: CohomologyClass) -> bool:
    """If ``alpha`` cup ``beta`` is nonzero and ``H`` cuts ``alpha`` then ``beta`` is nonzero on ``H``."""
    from .homology import cup_product, restriction_is_zero

    H = as_subcomplex(M, H)
    if alpha.k + beta.k > M.n or cup_product(alpha, beta).is_zero() or not cuts(M, H, alpha):
        return True
    return not restriction_is_zero(M, H, beta)

