from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from sforge.complexes import (ChainMap, ComplexError, ProjComplex, cone, direct_sum, hom_complex, identity_map,
                              is_tilting, shift, stalk)
from sforge.mutation import mutate
from sforge.projmap import ProjMap
from sforge.representations import cokernel, hom_space, projective, projmap_hom


def two_term(alg, f: ProjMap):
    return ProjComplex(alg, {-1: f.src, 0: f.tgt}, {-1: f})


def test_dd_checked(n23):
    a = ProjMap.from_elements(n23, [[n23.arrow("a")]])
    with pytest.raises(ComplexError):
        ProjComplex(n23, {-2: (2,), -1: (1,), 0: (2,)}, {-2: a, -1: ProjMap.from_elements(n23, [[n23.arrow("b")]])})
    # P_2 -a-> P_1 -ab-> P_1 composes to aba = 0
    ab = ProjMap.from_elements(n23, [[n23.path_element(["a", "b"])]])
    ProjComplex(n23, {-2: (2,), -1: (1,), 0: (1,)}, {-2: a, -1: ab})


def test_stalk_homs_are_algebra_blocks(n23, wsa):
    for alg in (n23, wsa):
        for i in alg.vertices:
            for j in alg.vertices:
                assert hom_complex(stalk(alg, i), stalk(alg, j)).dim == alg.dims[(j, i)]


def test_no_maps_between_stalks_in_different_degrees(wsa):
    assert hom_complex(stalk(wsa, 1), shift(stalk(wsa, 2), 1)).dim == 0


def test_shift_commutes_with_stalk(n23):
    assert shift(stalk(n23, 1), 2).terms == stalk(n23, 1, degree=-2).terms


def test_cone_of_identity_is_contractible(wsa):
    C = cone(identity_map(stalk(wsa, 5)))
    assert hom_complex(C, C).dim == 0


def test_cone_of_zero_map(n23):
    X, Y = stalk(n23, 1), stalk(n23, 2)
    C = cone(ChainMap(X, Y, {}))
    D = direct_sum(shift(X, 1), Y)
    assert C.terms == D.terms
    assert hom_complex(C, D).dim == hom_complex(D, D).dim


def test_cone_of_first_approximation(wsa):
    # f^1 = epsilon: P_5 -> P_2 gives a complex in degrees -1, 0
    eps = ProjMap.from_elements(wsa, [[wsa.arrow("epsilon")]])
    C = cone(ChainMap(stalk(wsa, 5), stalk(wsa, 2), {0: eps}))
    assert C.terms == {-1: (5,), 0: (2,)}
    st2 = mutate(wsa, 5, 2)
    assert st2.complex().terms == {-2: (5,), -1: (2,), 0: (2,)}


def test_iterated_cone_matches_mutation_complex(wsa):
    s1 = mutate(wsa, 5, 1)
    s2 = mutate(wsa, 5, 2)
    P1 = s1.complex()
    f2 = ChainMap(P1, stalk(wsa, s2.maps[1].tgt), {0: s2.maps[1]})
    assert f2.is_chain_map()
    C = cone(f2)
    assert C.terms == s2.complex().terms


def test_triangle_composites_null_homotopic(n23):
    s = mutate(n23, 1, 1)
    f = s.maps[0]
    X, Y = stalk(n23, 1), stalk(n23, f.tgt)
    g = ChainMap(X, Y, {0: f})
    C = cone(g)
    # Y -> C(g) inclusion composed with g is null-homotopic
    inc = ChainMap(Y, C, {0: ProjMap.identity(n23, f.tgt)})
    assert inc.is_chain_map()
    comp = inc @ g
    assert hom_complex(X, C).is_null_homotopic(comp)


@pytest.mark.parametrize("vertex,k", [(5, 1), (5, 2), (1, 1), (1, 2), (3, 2)])
def test_hom_into_stalk_equals_hom_from_cokernel(wsa, vertex, k):
    s = mutate(wsa, vertex, k)
    C = s.complex()
    fk = s.maps[-1]
    cok, _ = cokernel(projmap_hom(fk))
    for j in wsa.vertices:
        assert hom_complex(C, stalk(wsa, j)).dim == len(hom_space(cok, projective(wsa, j)))


def test_tilting(n23, wsa):
    assert is_tilting(stalk(n23, (1, 2))).holds
    assert is_tilting(mutate(n23, 1, 1).tilting_complex()).holds
    assert is_tilting(mutate(wsa, 1, 2).tilting_complex()).holds


def test_corrupted_differential_fails_tilting(n23):
    # the two-term complex P_1 -> P_2 by zero is not tilting together with P_2
    zero = ProjMap.zero(n23, (2,), (1,))
    T = direct_sum(two_term(n23, zero), stalk(n23, 2))
    v = is_tilting(T)
    assert not v.holds and v.failures
    assert v.generation_checked is False


def test_endomorphism_dimension_of_first_mutation(n23):
    from sforge.endo import present
    T = mutate(n23, 1, 1)
    E_dim = sum(hom_complex(a, b).dim for a in T.summands() for b in T.summands())
    assert E_dim == present(n23, T.summands()).algebra.dim == 6


@settings(max_examples=10, deadline=None)
@given(st.integers(-3, 3), st.sampled_from([(5, 1), (5, 2), (1, 1), (2, 2)]))
def test_hom_dims_shift_invariant(wsa, k, case):
    vertex, steps = case
    C = mutate(wsa, vertex, steps).complex()
    D = stalk(wsa, 2)
    assert hom_complex(C, D).dim == hom_complex(shift(C, k), shift(D, k)).dim
