import json

import numpy as np
import pytest

from z2systole.complex import (
    Chain,
    Subcomplex,
    barycentric_subdivision,
    boundary_matrix,
    build_complex,
    complex_from_dict,
    dumps_complex,
    is_closed_pseudomanifold,
    load_complex,
    save_complex,
    subdivision_volume_factor,
)
from z2systole import generators as gen


def test_triangle_boundary():
    M = build_complex([[0, 1], [1, 2], [2, 0]], 1)
    assert M.f_vector == (3, 3)
    assert M.vol == 3
    assert M.is_pure


def test_single_triangle():
    M = build_complex([[0, 1, 2]], 2)
    assert M.f_vector == (3, 3, 1)
    assert not is_closed_pseudomanifold(M)
    d2 = boundary_matrix(M, 2)
    assert d2.shape == (3, 1) and d2.data.sum() == 3


def test_torus7_counts(torus7):
    assert torus7.f_vector == (7, 21, 14)
    assert torus7.euler_characteristic() == 0
    assert is_closed_pseudomanifold(torus7)


def test_build_log_and_errors():
    M = build_complex([[0, 1, 2], [0, 1], [2, 1, 0]], 2)
    assert list(M.maximal_simplices) == [(0, 1, 2)]
    assert any("duplicate" in s for s in M.build_log)
    assert any("face" in s for s in M.build_log)
    with pytest.raises(ValueError):
        build_complex([], 2)
    with pytest.raises(ValueError):
        build_complex([[0, 1, 2, 3]], 2)


def test_non_pure_is_flagged():
    M = build_complex([[0, 1, 2], [2, 3]], 2)
    assert not M.is_pure
    assert any("not pure" in s for s in M.build_log)


def test_boundary_matrix_range_and_square_zero(t4):
    with pytest.raises(ValueError):
        boundary_matrix(t4, 0)
    with pytest.raises(ValueError):
        boundary_matrix(t4, 3)
    d1, d2 = boundary_matrix(t4, 1), boundary_matrix(t4, 2)
    assert (d1 @ d2).is_zero()
    tri = build_complex([[0, 1], [1, 2], [2, 0]], 1)
    b = boundary_matrix(tri, 1)
    assert b.rank() == 2 and np.all(b.data.sum(axis=0) == 2)


def test_disjoint_circles_not_closed_pseudomanifold():
    M = build_complex([[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5]], 1)
    assert not is_closed_pseudomanifold(M)


def test_subdivision_counts():
    S, vmap = barycentric_subdivision(build_complex([[0, 1]], 1))
    assert S.f_vector == (3, 2)
    S, vmap = barycentric_subdivision(build_complex([[0, 1, 2]], 2))
    assert S.f_vector == (7, 12, 6)
    assert set(vmap.values()) == {(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)}
    S, _ = barycentric_subdivision(gen.torus7())
    assert S.vol == subdivision_volume_factor(2) * 14


def test_json_roundtrip(tmp_path, torus7):
    p = tmp_path / "t.json"
    save_complex(torus7, p)
    N = load_complex(p)
    assert N == torus7
    assert dumps_complex(N) == p.read_text()
    data = json.loads(p.read_text())
    assert data["maximal_simplices"] == sorted(data["maximal_simplices"])
    with pytest.raises(ValueError):
        complex_from_dict({"maximal_simplices": []})


def test_rebuild_is_idempotent(t4):
    again = build_complex(t4.maximal_simplices, t4.n)
    assert again.f_vector == t4.f_vector


def test_fundamental_chain_is_cycle(torus7):
    z = Chain(torus7, 2, np.ones(torus7.vol, dtype=np.uint8))
    assert z.is_cycle()


def test_subcomplex_operations(t4):
    A = Subcomplex.from_simplices(t4, [(0, 1, 5)])
    assert A.count(0) == 3 and A.count(1) == 3 and A.count(2) == 1
    assert A.is_closed()
    B = Subcomplex.skeleton(t4, 0)
    assert (A & B).count(0) == 3
    assert (A | B).count(0) == 16
    assert A.minus(B).count(0) == 0
    assert not A.minus(B).is_closed()
    assert A.minus(B).closure() == A
    assert A.maximal_simplices() == [(0, 1, 5)]
    assert (0, 1) in A and 7 not in A
    assert A.issubset(t4.full())


def test_chain_arithmetic(t4):
    a = Chain.from_simplices(t4, 1, [(0, 1), (1, 2)])
    b = Chain.from_simplices(t4, 1, [(1, 2)])
    assert (a + b).support == [(0, 1)]
    assert (a + a).is_zero()
    assert a.boundary().support == [(0,), (2,)]
    with pytest.raises(ValueError):
        Chain.from_simplices(t4, 1, [(0, 9)])
