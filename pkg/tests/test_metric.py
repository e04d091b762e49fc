import pytest

from z2systole import generators as gen
from z2systole.complex import Chain, Subcomplex, build_complex
from z2systole.metric import (
    ball,
    check_separation,
    coarea_check,
    distances,
    factor_cycle,
    loops_to_chain,
    vitali_subcover,
)


def test_distances_hexagon(hexagon):
    df = distances(hexagon, 0)
    assert [df[v] for v in range(6)] == [0, 1, 2, 3, 2, 1]
    assert df.is_one_lipschitz()


def test_distances_triangle_and_disconnected():
    tri = build_complex([[0, 1, 2]], 2)
    assert [distances(tri, 0)[v] for v in range(3)] == [0, 1, 1]
    two = build_complex([[0, 1], [2, 3]], 1)
    assert distances(two, 0)[3] == float("inf")
    with pytest.raises(ValueError):
        distances(two, 9)


def test_ball_hexagon(hexagon):
    bs = ball(hexagon, 0, 1)
    assert bs.ball.simplices(1) == [(0, 1), (0, 5)]
    assert sorted(bs.ball.simplices(0)) == [(0,), (1,), (5,)]
    assert bs.sphere.simplices(0) == [(1,), (5,)]
    assert bs.sphere.count(1) == 0


def test_ball_radius_zero(t4):
    bs = ball(t4, 3, 0)
    assert bs.ball.all_simplices() == [(3,)]
    assert bs.sphere.all_simplices() == [(3,)]


def test_ball_saturates_past_diameter(torus7):
    ecc = int(distances(torus7, 0).dist.max())
    bs = ball(torus7, 0, ecc + 1)
    assert bs.ball == torus7.full()
    assert bs.sphere.is_empty()


def test_ball_requires_pure():
    M = build_complex([[0, 1, 2], [2, 3]], 2)
    with pytest.raises(ValueError):
        ball(M, 0, 1)


def test_ball_nesting_and_sphere_distances(t4):
    for r in range(0, 5):
        a, b = ball(t4, 0, r), ball(t4, 0, r + 1)
        assert a.ball.issubset(b.ball)
        d = a.field
        for s in a.sphere.all_simplices():
            assert all(d[v] == r for v in s)


def test_separation_examples(hexagon):
    assert check_separation(hexagon, 0, 1, [0, 1, 2])
    assert check_separation(hexagon, 0, 2, [0, 1])
    with pytest.raises(ValueError):
        check_separation(hexagon, 0, 1, [0, 2])


def test_coarea_examples(hexagon, t4):
    res = coarea_check(hexagon, 0, 2)
    assert (res.volume, res.sphere_sum, res.ok) == (4, 4, True)
    res = coarea_check(t4, 0, 0)
    assert (res.volume, res.sphere_sum, res.ok) == (0, 0, True)
    res = coarea_check(t4, 0, 2)
    assert res.ok and len(set(res.witness.values())) == len(res.witness)


def _path12():
    return build_complex([[i, i + 1] for i in range(11)], 1)


def test_vitali_single_ball(hexagon):
    H = Subcomplex.from_simplices(hexagon, [(0,)])
    res = vitali_subcover(hexagon, H, [(0, 3)])
    assert res.ok and res.selected == [0]


def test_vitali_path_two_balls():
    P = _path12()
    H = Subcomplex.from_simplices(P, [(2,), (8,)])
    res = vitali_subcover(P, H, [(2, 2), (8, 2)])
    assert res.ok and res.selected == [0, 1]


@pytest.mark.parametrize("order", ["largest-first", "paper"])
def test_vitali_meridian(order):
    M = gen.grid_torus(6)
    H = Subcomplex.from_simplices(M, [(i * 6, ((i + 1) % 6) * 6) for i in range(6)])
    verts = [int(v) for v in H.vertex_ids()]
    res = vitali_subcover(M, H, [(v, 1) for v in verts], order)
    assert res.ok
    tops = [ball(M, verts[i], 1).ball.masks[2] for i in res.selected]
    for i in range(len(tops)):
        for j in range(i + 1, len(tops)):
            assert not (tops[i] & tops[j]).any()


def test_vitali_rejects_bad_input(t4):
    H = Subcomplex.from_simplices(t4, [(0,)])
    with pytest.raises(ValueError):
        vitali_subcover(t4, H, [(0, 0)])
    with pytest.raises(ValueError):
        vitali_subcover(t4, H, [(1, 1)])
    with pytest.raises(ValueError):
        vitali_subcover(t4, H, [(0, 1)], order="random")


def test_factor_cycle_empty(t4):
    assert factor_cycle(t4, Chain.zero(t4, 1), 0, 1) == []


def test_factor_cycle_cone():
    cone = build_complex([[0, 1, 2], [0, 2, 3], [0, 1, 3]], 2)
    z = Chain.from_simplices(cone, 1, [(1, 2), (2, 3), (1, 3)])
    loops = factor_cycle(cone, z, 0, 1)
    assert all(len(l) - 1 <= 3 for l in loops)
    assert loops_to_chain(cone, loops) == z


def test_factor_cycle_errors(t4):
    with pytest.raises(ValueError):
        factor_cycle(t4, Chain.from_simplices(t4, 1, [(0, 1)]), 0, 1)
    far = Chain.from_simplices(t4, 1, [(10, 11), (11, 15), (10, 15)])
    with pytest.raises(ValueError):
        factor_cycle(t4, far, 0, 1)
