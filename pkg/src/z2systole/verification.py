"""Lemma and inequality checks on concrete instances, and CSV reports."""
from __future__ import annotations

import csv
import io
import math
import time
import zlib
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .complex import Chain, SimplicialComplex, Subcomplex
from .errors import DegeneratePairingError, LemmaViolation
from .gf2 import BinaryMatrix
from .homology import (
    CohomologyClass,
    cohomology_class_from_coords,
    cup_product,
    evaluate,
    homology_class,
    homology_context,
    poincare_dual,
    restriction_is_zero,
)
from .metric import ball, check_separation, coarea_check, distances, factor_cycle, loops_to_chain, vitali_subcover
from .minweight import Budget
from .systolic import (
    GoodBall,
    MinWeightResult,
    cut_alpha,
    cut_and_paste,
    cuts,
    good_ball_search,
    min_weight_in_class,
    sys_detected,
)

REPORT_VERSION = "z2systole-report v1"
COLUMNS = [
    "instance", "family", "n", "vol", "kind", "alpha", "sys", "sys_certified",
    "cut", "cut_certified", "cut_method", "eps", "ratio", "sys_le_vol", "area_le_bound",
    "good_ball", "checks", "failed",
]
SEARCH_AFFORDABLE = 5_000_000


@dataclass(frozen=True)
class Check:
    name: str
    status: str  # pass, fail or skip
    detail: str = ""

    @property
    def failed(self) -> bool:
        return self.status == "fail"


@dataclass
class VerificationReport:
    instance: str
    family: str
    n: int
    vol: int
    kind: str
    alpha: str
    sys: list[MinWeightResult]
    cut: MinWeightResult
    eps: float
    checks: list[Check] = field(default_factory=list)
    good_ball: str = ""
    timings: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        prod = math.prod(s.weight for s in self.sys) * self.cut.weight
        return prod / self.vol ** (1 + self.eps)

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)

    def check(self, name: str) -> Check | None:
        return next((c for c in self.checks if c.name == name), None)

    def row(self) -> list[str]:
        def status(name):
            c = self.check(name)
            return c.status if c else "skip"

        return [
            self.instance,
            self.family,
            str(self.n),
            str(self.vol),
            self.kind,
            self.alpha,
            ";".join(str(s.weight) for s in self.sys),
            ";".join(str(int(s.certified)) for s in self.sys),
            str(self.cut.weight),
            str(int(self.cut.certified)),
            self.cut.method,
            f"{self.eps:g}",
            f"{self.ratio:.12g}",
            status("sys_le_vol"),
            status("area_le_bound"),
            self.good_ball,
            ";".join(f"{c.name}={c.status}" for c in self.checks),
            str(sum(c.failed for c in self.checks)),
        ]


def write_csv(reports, out=None) -> str:
    """Render reports as CSV, preceded by a versioned comment line; timings are omitted."""
    buf = io.StringIO()
    buf.write(f"# {REPORT_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in sorted(reports, key=lambda r: (r.instance, r.kind, r.alpha)):
        w.writerow(r.row())
    text = buf.getvalue()
    if out is not None:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


def instance_rng(seed: int, instance: str) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(instance.encode())])


def coords_label(alpha: CohomologyClass) -> str:
    return "".join(str(c) for c in alpha.coords)


# -- randomized lemma checks ---------------------------------------------------------------


def random_edge_path(M: SimplicialComplex, rng: np.random.Generator, length: int) -> list[int]:
    indptr, nbrs, _ = M.adjacency()
    ids = M.vertices
    i = int(rng.integers(M.num_vertices))
    path = [int(ids[i])]
    for _ in range(length):
        lo, hi = indptr[i], indptr[i + 1]
        if hi == lo:
            break
        i = int(nbrs[rng.integers(lo, hi)])
        path.append(int(ids[i]))
    return path


def random_cycle_in(M: SimplicialComplex, sub: Subcomplex, rng: np.random.Generator) -> Chain:
    """A uniformly random 1-cycle supported on the edges of ``sub``."""
    edges = sub.indices(1)
    bits = np.zeros(M.count(1), dtype=np.uint8)
    if edges.size == 0:
        return Chain(M, 1, bits)
    D = M.boundary_dense(1)[:, edges]
    Z = BinaryMatrix(D).nullspace()
    if Z.shape[0]:
        mix = rng.integers(0, 2, size=Z.shape[0])
        bits[edges] = (mix @ Z.astype(np.int64)) % 2
    return Chain(M, 1, bits)


def eccentricity(M: SimplicialComplex, x: int) -> int:
    d = distances(M, x).dist
    return int(d.max())


def check_coarea(M: SimplicialComplex, centers=None) -> list[str]:
    """Violations of the co-area inequality for every centre and radius up to the eccentricity."""
    bad = []
    for x in (M.vertices if centers is None else centers):
        x = int(x)
        for r in range(0, eccentricity(M, x) + 1):
            try:
                res = coarea_check(M, x, r)
            except LemmaViolation as exc:
                bad.append(str(exc))
                continue
            if not res.ok:
                bad.append(f"x={x} r={r}: {res.volume} < {res.sphere_sum}")
    return bad


def check_separation_random(M: SimplicialComplex, rng: np.random.Generator, n_paths: int, max_len: int = 12) -> list[str]:
    bad = []
    for _ in range(n_paths):
        path = random_edge_path(M, rng, int(rng.integers(1, max_len + 1)))
        x = int(M.vertices[rng.integers(M.num_vertices)])
        r = int(rng.integers(0, max_len))
        if not check_separation(M, x, r, path):
            bad.append(f"x={x} r={r} path={path}")
    return bad


def factoring_radii(R: int) -> list[int]:
    return [r for r in range(0, R) if r < (R - 1) / 2]


def check_curve_factoring(M: SimplicialComplex, alpha: CohomologyClass, R: int, rng: np.random.Generator, n_cycles: int) -> list[str]:
    """Random cycles in small balls factor into short loops and are never detected."""
    bad = []
    radii = factoring_radii(R)
    if not radii:
        return bad
    for _ in range(n_cycles):
        x = int(M.vertices[rng.integers(M.num_vertices)])
        r = int(radii[rng.integers(len(radii))])
        z = random_cycle_in(M, ball(M, x, r).ball, rng)
        try:
            loops = factor_cycle(M, z, x, r)
        except LemmaViolation as exc:
            bad.append(f"x={x} r={r}: {exc}")
            continue
        if any(len(l) - 1 > 2 * r + 1 for l in loops) or loops_to_chain(M, loops) != z:
            bad.append(f"x={x} r={r}: factoring contract broken")
        if evaluate(alpha, z) != 0:
            bad.append(f"x={x} r={r}: small cycle detected by alpha")
    return bad


def check_cut_and_paste_random(M: SimplicialComplex, alpha: CohomologyClass, H: Subcomplex, R: int, rng: np.random.Generator, n_trials: int) -> list[str]:
    bad = []
    radii = factoring_radii(R)
    verts = H.vertex_ids()
    if not radii or verts.size == 0:
        return bad
    for _ in range(n_trials):
        x = int(verts[rng.integers(verts.size)])
        r = int(radii[rng.integers(len(radii))])
        try:
            cut_and_paste(M, H, alpha, x, r, R)
        except LemmaViolation as exc:
            bad.append(str(exc))
    return bad


def search_affordable(N: int, w: int) -> bool:
    return sum(math.comb(N, i) for i in range(w + 1)) <= SEARCH_AFFORDABLE


def dual_cut_equality(M: SimplicialComplex, alpha: CohomologyClass, budget: Budget | None, hint: int | None = None) -> Check:
    """Exhaustive cut search agrees with the minimal cycle in the dual class, and its top simplices represent that class."""
    try:
        dual = poincare_dual(M, alpha)
    except DegeneratePairingError as exc:
        return Check("dual_cut_equality", "skip", str(exc))
    via_dual = min_weight_in_class(M, dual, budget)
    j = M.n - alpha.k
    if not search_affordable(M.count(j), via_dual.weight if hint is None else hint):
        return Check("dual_cut_equality", "skip", "search too large")
    via_search = cut_alpha(M, alpha, budget, method="search")
    if not (via_dual.certified and via_search.certified):
        return Check("dual_cut_equality", "skip", "uncertified")
    top = via_search.chain
    ok = via_search.weight == via_dual.weight and top.is_cycle() and homology_class(top) == dual
    detail = f"search={via_search.weight} dual={via_dual.weight}"
    return Check("dual_cut_equality", "pass" if ok else "fail", detail)


def _status(bad: list[str]) -> Check:
    return ("pass", "") if not bad else ("fail", bad[0])


def _mk(name: str, bad: list[str], total: int | None = None) -> Check:
    status, detail = _status(bad)
    if total is not None and not bad:
        detail = f"{total} trials"
    return Check(name, status, detail)


# -- suites --------------------------------------------------------------------------------


def verify_theorem(
    M: SimplicialComplex,
    alpha: CohomologyClass,
    eps: float = 0.5,
    budget: Budget | None = None,
    *,
    instance: str = "M",
    family: str = "",
    seed: int = 0,
    order: str = "largest-first",
    samples: int = 100,
) -> VerificationReport:
    """All factors of the single-class inequality plus the supporting lemma checks."""
    budget = budget or Budget(seed=seed)
    rng = instance_rng(seed, instance + coords_label(alpha))
    timings = {}
    t0 = time.perf_counter()
    R = sys_detected(M, alpha, budget)
    timings["sys"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    cut = cut_alpha(M, alpha, budget)
    timings["cut"] = time.perf_counter() - t0
    H = cut.subcomplex
    V, n = M.vol, M.n
    rep = VerificationReport(instance, family, n, V, "single", coords_label(alpha), [R], cut, eps, timings=timings)
    checks = rep.checks
    checks.append(Check("sys_le_vol", "pass" if R.weight <= V else "fail", f"{R.weight} <= {V}"))
    checks.append(Check("area_le_bound", "pass" if cut.weight <= (n + 1) * V else "fail", f"{cut.weight} <= {(n + 1) * V}"))
    checks.append(Check("cut_valid", "pass" if cuts(M, H, alpha) else "fail"))

    t0 = time.perf_counter()
    centers = H.vertex_ids() if H.vertex_ids().size else M.vertices[:1]
    checks.append(_mk("coarea", check_coarea(M, centers[: min(8, centers.size)])))
    checks.append(_mk("separation", check_separation_random(M, rng, samples), samples))
    if alpha.k == 1:
        checks.append(_mk("curve_factoring", check_curve_factoring(M, alpha, R.weight, rng, samples), samples))
        checks.append(_mk("cut_and_paste", check_cut_and_paste_random(M, alpha, H, R.weight, rng, samples), samples))
    timings["lemmas"] = time.perf_counter() - t0

    checks.append(dual_cut_equality(M, alpha, budget, cut.weight))

    verts = H.vertex_ids()
    if verts.size:
        vit = vitali_subcover(M, H, [(int(v), 1) for v in verts], order)
        checks.append(Check("vitali_cover", "pass" if vit.ok else "fail", vit.witness or f"{len(vit.selected)} balls"))

    ls_bad = []
    j = n - alpha.k
    if j >= 0:
        h = homology_context(M, j).dim
        for t in range(1, 1 << min(h, 6)):
            beta = cohomology_class_from_coords(M, j, [(t >> i) & 1 for i in range(h)])
            if not cup_product(alpha, beta).is_zero() and restriction_is_zero(M, H, beta):
                ls_bad.append(f"beta={coords_label(beta)} vanishes on H")
    checks.append(_mk("ls_restriction", ls_bad))

    if not 0 < eps < 1:
        rep.good_ball = "n/a"
    elif alpha.k == 1 and R.certified and verts.size:
        outcome = good_ball_search(M, H, alpha, int(verts[0]), eps, R.weight)
        if isinstance(outcome, GoodBall):
            rep.good_ball = f"found r={outcome.radius}"
        else:
            rep.good_ball = "small-R" if not outcome.trace else "exhausted"
    return rep


def verify_multiclass(
    M: SimplicialComplex,
    alphas: list[CohomologyClass],
    eps: float = 0.5,
    budget: Budget | None = None,
    *,
    instance: str = "M",
    family: str = "",
    seed: int = 0,
) -> VerificationReport:
    """Factors of the multi-class inequality; the cut of the cup product is found by exhaustive search."""
    if not alphas:
        raise ValueError("need at least one class")
    budget = budget or Budget(seed=seed)
    prod = reduce(cup_product, alphas)
    if prod.is_zero():
        raise ValueError("cup product of the classes vanishes")
    timings = {}
    t0 = time.perf_counter()
    sys = [sys_detected(M, a, budget) for a in alphas]
    timings["sys"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    cut = cut_alpha(M, prod, budget, method="search")
    timings["cut"] = time.perf_counter() - t0
    V, n = M.vol, M.n
    label = "*".join(coords_label(a) for a in alphas)
    rep = VerificationReport(instance, family, n, V, "multi", label, sys, cut, eps, timings=timings)
    rep.checks.append(Check("cup_nonzero", "pass", coords_label(prod)))
    worst = max(s.weight for s in sys)
    rep.checks.append(Check("sys_le_vol", "pass" if worst <= V else "fail", f"{worst} <= {V}"))
    rep.checks.append(Check("area_le_bound", "pass" if cut.weight <= (n + 1) * V else "fail"))
    rep.checks.append(Check("cut_valid", "pass" if cuts(M, cut.subcomplex, prod) else "fail"))
    try:
        dual = poincare_dual(M, prod)
    except DegeneratePairingError as exc:
        rep.checks.append(Check("dual_cut_equality", "skip", str(exc)))
    else:
        via_dual = min_weight_in_class(M, dual, budget)
        ok = via_dual.weight == cut.weight and homology_class(cut.chain) == dual
        rep.checks.append(Check("dual_cut_equality", "pass" if ok else "fail", f"search={cut.weight} dual={via_dual.weight}"))
    return rep


def cup_pair(M: SimplicialComplex) -> tuple[CohomologyClass, CohomologyClass] | None:
    """The first pair of degree-1 basis-sweep classes with nonzero cup product."""
    from .homology import nonzero_cohomology_classes

    classes = nonzero_cohomology_classes(M, 1)
    for i, a in enumerate(classes):
        for b in classes[i + 1:]:
            if a.k + b.k <= M.n and not cup_product(a, b).is_zero():
                return a, b
    return None
