"""Both kernel backends must agree bit for bit."""
import itertools

import numpy as np
import pytest

from z2systole.kernels import _numpy

_numba = pytest.importorskip("z2systole.kernels._numba")

BACKENDS = [_numpy, _numba]


def random_graph(rng, n, p):
    pairs = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    src = [u for u, v in pairs] + [v for u, v in pairs]
    dst = [v for u, v in pairs] + [u for u, v in pairs]
    order = np.lexsort((dst, src))
    src, dst = np.asarray(src)[order], np.asarray(dst)[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst.astype(np.int64)


@pytest.mark.parametrize("seed", range(5))
def test_rref_agrees(seed):
    rng = np.random.default_rng(seed)
    from z2systole.gf2 import pack_rows

    A = rng.integers(0, 2, size=(17, 130)).astype(np.uint8)
    W1, W2 = pack_rows(A), pack_rows(A)
    p1 = _numpy.gf2_rref(W1, 130)
    p2 = _numba.gf2_rref(W2, 130)
    assert list(p1) == list(p2)
    assert np.array_equal(W1, W2)


@pytest.mark.parametrize("seed", range(5))
def test_bfs_agrees(seed):
    rng = np.random.default_rng(seed)
    indptr, idx = random_graph(rng, 30, 0.12)
    out = [b.bfs(indptr, idx, 0) for b in BACKENDS]
    for a, b in zip(out[0], out[1]):
        assert np.array_equal(a, b)


@pytest.mark.parametrize("seed", range(4))
def test_fiber_distances_agree(seed):
    rng = np.random.default_rng(seed)
    n, S = 12, 4
    indptr, idx = random_graph(rng, n * S, 0.08)
    a = _numpy.fiber_distances(indptr, idx, n, S)
    b = _numba.fiber_distances(indptr, idx, n, S)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("d", [0, 3, 9, 16])
def test_coset_min_agrees_with_brute_force(d):
    from z2systole.gf2 import pack_rows, pack_vector, unpack_vector

    rng = np.random.default_rng(d)
    n = 40
    basis = rng.integers(0, 2, size=(d, n)).astype(np.uint8)
    z0 = rng.integers(0, 2, size=n).astype(np.uint8)
    Bp = pack_rows(basis) if d else np.zeros((0, 1), np.uint64)
    res = [b.coset_min(pack_vector(z0), Bp) for b in BACKENDS]
    assert res[0][0] == res[1][0]
    assert np.array_equal(res[0][1], res[1][1])
    if d <= 9:
        best = min(
            (int(v.sum()), tuple(np.flatnonzero(v)))
            for v in ((z0 + np.asarray(c) @ basis) % 2 for c in itertools.product([0, 1], repeat=d))
        ) if d else (int(z0.sum()), tuple(np.flatnonzero(z0)))
        assert res[0][0] == best[0]
        assert tuple(np.flatnonzero(unpack_vector(res[0][1], n))) == best[1]


@pytest.mark.parametrize("seed", range(6))
def test_parity_consistent_agrees(seed):
    rng = np.random.default_rng(seed)
    n = 15
    eu = rng.integers(0, n, 30)
    ev = rng.integers(0, n, 30)
    keep = eu != ev
    eu, ev = eu[keep].astype(np.int64), ev[keep].astype(np.int64)
    val = rng.integers(0, 2, eu.size).astype(np.int64)
    alive = rng.random(n) < 0.7
    assert _numpy.parity_consistent(n, eu, ev, val, alive) == _numba.parity_consistent(n, eu, ev, val, alive)


def test_cut_search_agrees():
    # odd cycle on 5 nodes plus two candidate nodes on it
    n = 5
    eu = np.array([0, 1, 2, 3, 4], dtype=np.int64)
    ev = np.array([1, 2, 3, 4, 0], dtype=np.int64)
    val = np.array([1, 0, 0, 0, 0], dtype=np.int64)
    parent = np.arange(n, dtype=np.int64)
    parity = np.zeros(n, dtype=np.int64)
    cand = np.array([2, 3], dtype=np.int64)
    for w in (0, 1, 2):
        a = _numpy.cut_search(parent, parity, cand, eu, ev, val, w, 100)
        b = _numba.cut_search(parent, parity, cand, eu, ev, val, w, 100)
        assert a[0] == b[0] and list(a[1]) == list(b[1])
    assert _numba.cut_search(parent, parity, cand, eu, ev, val, 0, 100)[0] == 0
    assert _numba.cut_search(parent, parity, cand, eu, ev, val, 1, 100)[0] == 1
