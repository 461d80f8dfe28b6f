from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from sforge.algebra import build_algebra
from sforge.complexes import is_tilting
from sforge.examples import NakayamaParams, symmetric_nakayama
from sforge.mutation import (NoClosureFound, approximations_isomorphic, build_addq_resolution, canonical_resolution,
                             check_kb_approximation, explore_mutation_class, find_periodic_closure,
                             from_projective_resolution, initial_state, mutate, mutate_step, periodic_extension,
                             resolution_isomorphism, right_approximations_isomorphic, tilting_checks, trace_dim)
from sforge.projmap import ProjMap, image_equals_kernel


def pm(alg, rows):
    return ProjMap.from_elements(alg, rows)


def test_first_steps_at_vertex5(wsa, path):
    s = mutate(wsa, 5, 2)
    assert approximations_isomorphic(s.maps[0], pm(wsa, [[path("epsilon")]])) is not None
    # f^2 is left multiplication by εη on P_2
    f2 = pm(wsa, [[path("epsilon", "eta")]])
    assert approximations_isomorphic(s.maps[1], f2) is not None
    assert s.is_exact()


def test_first_steps_at_vertex1(wsa, path):
    s = mutate(wsa, 1, 2)
    f1 = pm(wsa, [[path("delta")], [path("delta", "rho")]])
    assert approximations_isomorphic(s.maps[0], f1) is not None
    zero = wsa.element(3, 4, wsa.zero(3, 4))
    A = path("beta", "epsilon", "eta", "nu")
    f2 = pm(wsa, [[path("xi"), -A], [zero, path("xi")]])
    assert resolution_isomorphism(s.maps, [f1, f2]) is not None


def test_each_step_is_a_kb_approximation(wsa):
    s = initial_state(wsa, 1)
    for _ in range(3):
        nxt = mutate_step(s)
        assert check_kb_approximation(wsa, 1, s.complex(), nxt.maps[-1])
        s = nxt


def test_resolutions_of_wsa(wsa_res):
    for i in (1, 5):
        r = wsa_res[i]
        assert r.length == 2 and r.complete and r.d_plus is not None
        assert not r.cok_is_top and not r.ker_f1_is_socle
    assert [f.tgt for f in wsa_res[5].maps] == [(2,), (2,)]
    assert [f.tgt for f in wsa_res[1].maps] == [(4, 4), (3, 3)]


def test_closure_is_a_right_approximation(wsa, wsa_res):
    for i in wsa.vertices:
        r = wsa_res[i]
        assert r.d_plus.rank() == trace_dim(wsa, i)
        assert image_equals_kernel(r.maps[-1], r.d_plus)


def test_closures_are_eta_and_rho_alpha_alpha(wsa, wsa_res, path):
    eta = pm(wsa, [[path("eta")]])
    assert right_approximations_isomorphic(wsa_res[5].d_plus, eta) is not None
    d1 = pm(wsa, [[path("rho", "alpha"), path("alpha")]])
    assert right_approximations_isomorphic(wsa_res[1].d_plus, d1) is not None


def test_find_periodic_closure(wsa_res):
    r = wsa_res[5]
    assert find_periodic_closure(r) is not None
    with pytest.raises(NoClosureFound):
        find_periodic_closure(type(r)(r.alg, 5, [], False))


def test_from_projective_resolution(n23, wsa):
    r = from_projective_resolution(n23, 1)
    assert r is not None and r.length == 2 and r.ker_f1_is_socle and r.cok_is_top
    assert from_projective_resolution(wsa, 5) is None
    assert from_projective_resolution(wsa, 1) is None
    r3 = from_projective_resolution(wsa, 3)
    assert r3 is not None and r3.length == 2


def test_projective_resolution_is_the_canonical_one(n23, wsa):
    for alg, i in ((n23, 1), (n23, 2), (wsa, 3)):
        r = from_projective_resolution(alg, i)
        a = canonical_resolution(r, verify=True)
        b = canonical_resolution(build_addq_resolution(alg, i), verify=True)
        assert [f.flat().tolist() for f in a.maps] == [f.flat().tolist() for f in b.maps]


def test_periodic_extension(wsa_res):
    for i in (1, 5):
        r = wsa_res[i]
        m = r.length
        assert periodic_extension(r, m).maps == r.maps
        ext = periodic_extension(r, m + 1)
        assert ext.maps[-1] == r.maps[0] @ r.d_plus
        direct = mutate(r.alg, i, m + 2)
        assert resolution_isomorphism(periodic_extension(r, m + 2).maps, direct.maps) is not None


def test_periodic_extension_needs_closure(wsa):
    r = build_addq_resolution(wsa, 5, max_len=1)
    assert not r.complete
    with pytest.raises(NoClosureFound):
        periodic_extension(r, 3)


def test_tilting_checks(wsa):
    for k, v in enumerate(tilting_checks(mutate(wsa, 1, 2))):
        assert v.holds, k


def test_resolution_json(wsa_res):
    obj = wsa_res[1].to_json()
    assert obj["terms"] == [[1], [4, 4], [3, 3]] and obj["cok_is_top"] is False


def test_explore_depth_zero(n23):
    res = explore_mutation_class(n23, 0)
    assert len(res.nodes) == 1 and not res.edges


def test_explore_n23(n23):
    res = explore_mutation_class(n23, 2)
    assert len(res.nodes) == 1 and not res.truncated and not res.unresolved
    assert sorted(res.edges) == [(0, 1, 0), (0, 2, 0)]


def test_explore_wsa(wsa):
    res = explore_mutation_class(wsa, 2, vertices=[1, 5])
    assert len(res.nodes) == 2
    assert sorted(res.edges) == [(0, 1, 1), (0, 5, 0), (1, 1, 0), (1, 5, 1)]


def test_explore_truncation(wsa):
    res = explore_mutation_class(wsa, 2, vertices=[1, 5], node_cap=1)
    assert res.truncated and len(res.nodes) == 1
    assert "truncated" in res.to_dot()


def test_explore_threads_do_not_change_output(n23, wsa):
    a = explore_mutation_class(wsa, 1, vertices=[1, 5], threads=1)
    b = explore_mutation_class(wsa, 1, vertices=[1, 5], threads=4)
    assert a.to_dot() == b.to_dot() and a.to_json() == b.to_json()


@settings(max_examples=8, deadline=None)
@given(st.sampled_from([(2, 3), (3, 4), (2, 5), (1, 3)]), st.integers(1, 3), st.data())
def test_mutation_complexes_are_tilting(params, k, data):
    alg = build_algebra(symmetric_nakayama(NakayamaParams(*params)))
    i = data.draw(st.sampled_from(list(alg.vertices)))
    if alg.n == 1:
        return
    r = build_addq_resolution(alg, i)
    assert r.complete and r.state().is_exact()
    assert is_tilting(mutate(alg, i, k).tilting_complex()).holds
