"""Property tests over random complexes and chains."""
import json

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from z2systole import generators as gen
from z2systole.complex import Chain, complex_from_dict, dumps_complex
from z2systole.homology import betti_numbers, cohomology_basis, evaluate, homology_basis
from z2systole.systolic import brute_force_sys_detected, double_cover_shortest_loop

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

complexes = st.builds(
    lambda v, t, s: gen.random_pure_complex(v, min(t, v * (v - 1) * (v - 2) // 6), 2, s),
    st.integers(4, 9),
    st.integers(2, 14),
    st.integers(0, 2**31),
)


@SETTINGS
@given(complexes)
def test_boundary_squares_to_zero(M):
    for k in range(2, M.n + 1):
        prod = M.boundary_dense(k - 1).astype(np.int64) @ M.boundary_dense(k).astype(np.int64)
        assert not (prod % 2).any()


@SETTINGS
@given(complexes)
def test_euler_characteristic(M):
    f = M.f_vector
    b = betti_numbers(M)
    assert sum((-1) ** i * x for i, x in enumerate(f)) == sum((-1) ** i * x for i, x in enumerate(b))


@SETTINGS
@given(complexes)
def test_json_round_trip(M):
    text = dumps_complex(M)
    assert dumps_complex(complex_from_dict(json.loads(text))) == text
    assert complex_from_dict(json.loads(text)) == M


@SETTINGS
@given(complexes)
def test_bases_are_dual(M):
    hs, cs = homology_basis(M, 1), cohomology_basis(M, 1)
    assert len(hs) == len(cs)
    for i, a in enumerate(cs):
        for j, z in enumerate(hs):
            assert evaluate(a, z.representative) == int(i == j)


@SETTINGS
@given(complexes)
def test_double_cover_matches_brute_force(M):
    for a in cohomology_basis(M, 1):
        res = double_cover_shortest_loop(M, a)
        assert res.weight == brute_force_sys_detected(M, a)
        loop = Chain(M, 1, res.chain.bits)
        assert evaluate(a, loop) == 1
