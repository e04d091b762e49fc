import numpy as np
import pytest

from z2systole import generators as gen
from z2systole.complex import Chain, Cochain, Subcomplex, build_complex
from z2systole.homology import (
    class_with_dual,
    cohomology_basis,
    cohomology_class,
    cup_product,
    homology_basis,
    homology_class,
    nonzero_cohomology_classes,
    poincare_dual,
)
from z2systole.metric import ball
from z2systole.systolic import (
    CutComplex,
    Exhausted,
    GoodBall,
    brute_force_sys_detected,
    cut_alpha,
    cut_and_paste,
    cuts,
    double_cover_shortest_loop,
    good_ball_search,
    ls_remark_holds,
    min_weight_in_class,
    radius_ladder,
    sys_detected,
    systole,
)


def test_min_weight_zero_class(t4):
    z = homology_class(Chain.zero(t4, 1))
    res = min_weight_in_class(t4, z)
    assert res.weight == 0 and res.certified


def test_min_weight_circle(hexagon):
    (a,) = homology_basis(hexagon, 1)
    assert min_weight_in_class(hexagon, a).weight == 6


def test_min_weight_grid_generators(t4):
    for a in homology_basis(t4, 1):
        res = min_weight_in_class(t4, a)
        assert res.weight == 4 and res.certified
        assert homology_class(res.chain) == a


def test_sys_detected_examples(hexagon, torus7, rp2):
    (a,) = cohomology_basis(hexagon, 1)
    assert sys_detected(hexagon, a).weight == 6
    for a in cohomology_basis(torus7, 1):
        assert sys_detected(torus7, a).weight == 3
        assert brute_force_sys_detected(torus7, a) == 3
    (x,) = cohomology_basis(rp2, 1)
    assert sys_detected(rp2, x).weight == 3


def test_sys_detected_rejects_zero(t4):
    zero = cohomology_class(Cochain.zero(t4, 1))
    with pytest.raises(ValueError):
        sys_detected(t4, zero)
    with pytest.raises(ValueError):
        double_cover_shortest_loop(t4, zero)


def test_double_cover_grid5_matches_brute_force():
    M = gen.grid_torus(5)
    for a in cohomology_basis(M, 1):
        res = double_cover_shortest_loop(M, a)
        assert res.weight == 5 and res.certified
        assert res.loop[0] == res.loop[-1] and len(res.loop) == 6
        generic = sys_detected(M, a, method="deepen")
        assert generic.weight == 5


def test_double_cover_representative_independence(t4, rng):
    for a in cohomology_basis(t4, 1):
        w = double_cover_shortest_loop(t4, a).weight
        for _ in range(5):
            f = Cochain(t4, 0, rng.integers(0, 2, 16).astype(np.uint8))
            b = cohomology_class(Cochain(t4, 1, (a.representative + f.coboundary()).bits))
            assert b == a
            assert double_cover_shortest_loop(t4, b).weight == w


def test_systole_of_higher_degree():
    M = gen.s1_x_sphere(4, 3)
    assert systole(M, 2).weight == 4
    assert systole(M, 1).weight == 4


def test_cut_grid_torus_both_routes(t4):
    for a in cohomology_basis(t4, 1):
        dual = cut_alpha(t4, a, method="dual")
        search = cut_alpha(t4, a, method="search")
        assert dual.weight == search.weight == 4
        assert dual.certified and search.certified
        assert cuts(t4, search.subcomplex, a)
        assert homology_class(search.chain) == poincare_dual(t4, a)


def test_cut_never_empty(t4):
    for a in cohomology_basis(t4, 1):
        assert not cuts(t4, Subcomplex.empty(t4), a)
        assert cut_alpha(t4, a).weight > 0


def test_cut_top_degree_class_is_a_vertex(t4):
    a, b = cohomology_basis(t4, 1)
    res = cut_alpha(t4, cup_product(a, b), method="search")
    assert res.weight == 1 and res.certified


def test_cut_non_manifold_uses_search():
    # torus with an extra dangling triangle is not a closed pseudomanifold
    T = gen.grid_torus(3)
    M = build_complex(list(T.maximal_simplices) + [[0, 1, 99]], 2)
    a = cohomology_basis(M, 1)[0]
    res = cut_alpha(M, a)
    assert res.method.startswith("search")
    assert any("dual route unavailable" in n for n in res.notes)
    assert cuts(M, res.subcomplex, a)


def test_example_connected_sum_inequality(t4):
    M, cmap = gen.connected_sum(t4, t4)
    alpha = class_with_dual(M, homology_class(cmap.alpha_star()))
    cut = cut_alpha(M, alpha)
    assert cut.certified
    betas = [b for b in nonzero_cohomology_classes(M, 1) if not cup_product(alpha, b).is_zero()]
    worst = max(sys_detected(M, b).weight for b in betas)
    assert worst < cut.weight
    assert cut.weight >= 2 * cmap.summand_systole(0) - 6
    # an independent exact engine gives the same minimum
    dual = poincare_dual(M, alpha)
    assert min_weight_in_class(M, dual, method="deepen").weight == cut.weight


def _meridian_H(M, k):
    return Subcomplex.from_simplices(M, [(i * k, ((i + 1) % k) * k) for i in range(k)])


def test_cut_and_paste_grid8():
    M = gen.grid_torus(8)
    H = _meridian_H(M, 8)
    alpha = class_with_dual(M, homology_class(Chain.from_simplices(M, 1, H.simplices(1))))
    for x in H.vertex_ids():
        out = cut_and_paste(M, H, alpha, int(x), 1)
        assert isinstance(out, CutComplex) and cuts(M, out.subcomplex, alpha)


def test_cut_and_paste_noop(t4):
    # outside H and with the sphere already in H nothing changes
    M = gen.grid_torus(8)
    H = _meridian_H(M, 8)
    alpha = class_with_dual(M, homology_class(Chain.from_simplices(M, 1, H.simplices(1))))
    out = cut_and_paste(M, H, alpha, 0, 0)
    assert out.subcomplex == H


def test_cut_and_paste_preconditions(t4):
    H = _meridian_H(t4, 4)
    alpha = class_with_dual(t4, homology_class(Chain.from_simplices(t4, 1, H.simplices(1))))
    with pytest.raises(ValueError):
        cut_and_paste(t4, H, alpha, 0, 2)
    with pytest.raises(ValueError):
        cut_and_paste(t4, H, alpha, 1, 0)
    with pytest.raises(ValueError):
        cut_and_paste(t4, Subcomplex.skeleton(t4, 0), alpha, 0, 0)


def test_radius_ladder():
    assert radius_ladder(16, 0.9) == [4, 16]
    assert radius_ladder(4, 0.5) == [4]
    assert radius_ladder(1000, 0.5) == [64, 256]


def test_good_ball_small_R(t4):
    H = _meridian_H(t4, 4)
    alpha = class_with_dual(t4, homology_class(Chain.from_simplices(t4, 1, H.simplices(1))))
    out = good_ball_search(t4, H, alpha, 0, 0.5)
    assert isinstance(out, Exhausted) and not out.found
    assert out.trace == () and not out.r_eps_ge_64


def test_good_ball_grid16():
    M = gen.grid_torus(16)
    H = _meridian_H(M, 16)
    alpha = class_with_dual(M, homology_class(Chain.from_simplices(M, 1, H.simplices(1))))
    out = good_ball_search(M, H, alpha, 0, 0.9)
    assert isinstance(out, GoodBall)
    lo = 16 ** 0.1
    assert out.h <= (4 / lo) * ball(M, 0, out.radius // 2).vol


def test_good_ball_errors(t4):
    H = _meridian_H(t4, 4)
    alpha = cohomology_basis(t4, 1)[0]
    with pytest.raises(ValueError):
        good_ball_search(t4, H, alpha, 1, 0.5)
    with pytest.raises(ValueError):
        good_ball_search(t4, H, alpha, 0, 1.5)


def test_ls_remark(torus7, rp2):
    for M in (torus7, rp2):
        for a in nonzero_cohomology_classes(M, 1):
            H = cut_alpha(M, a).subcomplex
            for b in nonzero_cohomology_classes(M, 1):
                assert ls_remark_holds(M, H, a, b)
