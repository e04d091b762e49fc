"""Time the compiled kernels against the numpy fallback on representative inputs.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. The first
compiled call includes JIT compilation and is reported separately.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from z2systole import generators as gen
from z2systole.gf2 import pack_rows, pack_vector
from z2systole.homology import ComplementModel, cohomology_basis
from z2systole.kernels import _numpy

try:
    from z2systole.kernels import _numba
except ImportError:
    _numba = None


def workloads(seed: int):
    rng = np.random.default_rng(seed)
    big = gen.grid_torus(60)
    indptr, nbrs, _ = big.adjacency()

    D = gen.grid_torus(16).boundary_dense(2).T.copy()

    basis = rng.integers(0, 2, size=(18, 96)).astype(np.uint8)
    z0 = pack_vector(rng.integers(0, 2, size=96).astype(np.uint8))
    packed = pack_rows(basis)

    sheets = 4
    n = 2000
    src = np.repeat(np.arange(n * sheets), 3)
    dst = rng.integers(0, n * sheets, src.size)
    both = np.concatenate([src, dst]), np.concatenate([dst, src])
    order = np.lexsort((both[1], both[0]))
    s, d = both[0][order], both[1][order]
    fptr = np.zeros(n * sheets + 1, dtype=np.int64)
    np.add.at(fptr, s + 1, 1)
    fptr = np.cumsum(fptr)

    T = gen.grid_torus(4)
    model = ComplementModel.of(T)
    alpha = cohomology_basis(T, 1)[0]
    eu, ev, val = model.edge_arrays(alpha.representative.bits)
    dims = model.dims
    live = (dims[eu] >= 1) & (dims[ev] >= 1)
    eu, ev, val = eu[live], ev[live], val[live]
    parent = np.arange(model.num_nodes, dtype=np.int64)
    parity = np.zeros(model.num_nodes, dtype=np.int64)
    cand = model.offsets[1] + np.arange(T.count(1), dtype=np.int64)

    return {
        "gf2_rref": lambda k: k.gf2_rref(pack_rows(D), D.shape[1]),
        "bfs": lambda k: k.bfs(indptr, nbrs, 0),
        "coset_min": lambda k: k.coset_min(z0, packed),
        "fiber_distances": lambda k: k.fiber_distances(fptr, d.astype(np.int64), n, sheets),
        "cut_search": lambda k: k.cut_search(parent, parity, cand, eu, ev, val, 3, 10**9),
    }


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    jobs = workloads(args.seed)
    print(f"{'kernel':<16} {'numpy s':>10} {'numba s':>10} {'jit s':>8} {'speedup':>8}")
    for name, job in jobs.items():
        t_np = best_of(lambda: job(_numpy), args.repeat)
        if _numba is None:
            print(f"{name:<16} {t_np:>10.4f} {'n/a':>10} {'n/a':>8} {'n/a':>8}")
            continue
        t0 = time.perf_counter()
        job(_numba)
        jit = time.perf_counter() - t0
        t_nb = best_of(lambda: job(_numba), args.repeat)
        print(f"{name:<16} {t_np:>10.4f} {t_nb:>10.4f} {jit:>8.2f} {t_np / max(t_nb, 1e-9):>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
