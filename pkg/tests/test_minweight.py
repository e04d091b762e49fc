"""The exact engines must agree with each other and with brute force."""
import itertools

import numpy as np
import pytest

from z2systole import generators as gen
from z2systole.minweight import (
    Budget,
    BudgetExhausted,
    accept_class,
    accept_detected,
    accept_nonzero,
    min_weight,
)
from z2systole.systolic import cohomology_problem, homology_problem


def brute(problem, accept):
    best = None
    for bits in itertools.product([0, 1], repeat=problem.ncells):
        z = np.array(bits, dtype=np.uint8)
        if not z.any() or not problem.is_closed(z) or not accept[problem.coords(z)]:
            continue
        key = (int(z.sum()), tuple(np.flatnonzero(z)))
        if best is None or key < best:
            best = key
    return best


def test_accept_tables():
    assert accept_class(2, 3).tolist() == [False, False, False, True]
    assert accept_detected(2, 1).tolist() == [False, True, False, True]
    assert accept_nonzero(2).tolist() == [False, True, True, True]


def test_engines_match_brute_force_on_small_complex():
    from z2systole.complex import build_complex

    M = build_complex([[0, 1], [1, 2], [2, 0], [2, 3], [3, 4], [4, 2], [0, 4]], 1)
    prob = homology_problem(M, 1)
    for t in range(1, 1 << prob.h):
        acc = accept_class(prob.h, t)
        ref = brute(prob, acc)
        for method in ("cover", "enumerate", "deepen"):
            sol = min_weight(prob, acc, method=method)
            assert sol.certified and sol.weight == ref[0]
        assert tuple(np.flatnonzero(min_weight(prob, acc, method="enumerate").bits)) == ref[1]
        assert tuple(np.flatnonzero(min_weight(prob, acc, method="deepen").bits)) == ref[1]


@pytest.mark.parametrize("M", [gen.torus7(), gen.grid_torus(3), gen.rp2_minimal()], ids=["torus7", "t3", "rp2"])
def test_engines_agree_on_surfaces(M):
    for prob in (homology_problem(M, 1), cohomology_problem(M, 1)):
        for t in range(1, 1 << prob.h):
            acc = accept_class(prob.h, t)
            w = {m: min_weight(prob, acc, method=m).weight for m in ("cover", "enumerate", "deepen")}
            assert len(set(w.values())) == 1, w
            assert min_weight(prob, acc, method="descent").weight >= w["cover"]


def test_two_dimensional_classes_by_deepening():
    M = gen.s1_x_sphere(4, 3)
    prob = homology_problem(M, 2)
    sol = min_weight(prob, accept_nonzero(prob.h))
    assert sol.certified and sol.weight == 4


def test_budget_exhaustion_falls_back_uncertified():
    M = gen.s1_x_sphere(4, 3)
    prob = homology_problem(M, 2)
    sol = min_weight(prob, accept_nonzero(prob.h), Budget(max_nodes=3))
    assert not sol.certified and sol.method == "descent"
    with pytest.raises(BudgetExhausted):
        min_weight(prob, accept_nonzero(prob.h), Budget(max_nodes=3), method="deepen")


def test_rejects_bad_targets():
    prob = homology_problem(gen.torus7(), 1)
    with pytest.raises(ValueError):
        min_weight(prob, np.zeros(4, dtype=bool))
    with pytest.raises(ValueError):
        min_weight(prob, np.ones(3, dtype=bool))
    with pytest.raises(ValueError):
        min_weight(prob, accept_nonzero(2), method="bogus")
