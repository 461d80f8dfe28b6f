from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sforge import linalg
from sforge.algebra import (AlgebraPresentation, Arrow, Disconnected, NotAdmissible, NotSelfInjective,
                            NotWeaklySymmetric, Quiver, Relation, VertexMismatch, ZeroRelationDegenerate,
                            build_algebra, multiply)
from sforge.examples import NakayamaParams, symmetric_nakayama
from sforge.field import FieldError, PrimeField, RationalField, parse_field

from oracles import brute_rank_mod_p, nakayama_block_dims, path_algebra_dimension

F5 = PrimeField(5)
Q = RationalField()


def pres(n, arrows, rels, field=None):
    F = field or F5
    return AlgebraPresentation(F, Quiver(n, [Arrow(*a) for a in arrows]), [Relation(r) for r in rels])


# ---------------------------------------------------------------------------
# fields


def test_parse_field():
    assert parse_field({"prime": 7}) == PrimeField(7)
    assert parse_field("rational") == Q
    with pytest.raises(FieldError):
        parse_field({"prime": 9})


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6), st.sampled_from([2, 3, 5, 7, 101]))
def test_prime_field_is_a_field(a, b, p):
    F = PrimeField(p)
    x, y = F.elem(a), F.elem(b)
    assert F.add(x, y) == (a + b) % p
    assert F.mul(x, y) == (a * b) % p
    if x:
        assert F.mul(x, F.inv(x)) == 1


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_rational_field_exact(a, b):
    assert Q.add(Q.elem(a), Q.elem(b)) == Fraction(a) + Fraction(b)
    if b:
        assert Q.mul(Q.elem(a), Q.inv(Q.elem(b))) == Fraction(a) / Fraction(b)


# ---------------------------------------------------------------------------
# linear algebra


matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=m, max_size=m)))


@given(matrices)
def test_rank_matches_brute_force(rows):
    assert linalg.rank(F5.array(rows), F5) == brute_rank_mod_p(rows, 5)


@given(matrices)
def test_rank_nullity(rows):
    A = F5.array(rows)
    N = linalg.nullspace(A, F5)
    assert linalg.rank(A, F5) + N.shape[1] == A.shape[1]
    assert linalg.is_zero(F5.matmul(A, N))


@given(matrices, st.data())
def test_solve_recovers_consistent_systems(rows, data):
    A = F5.array(rows)
    x = F5.array(data.draw(st.lists(st.integers(0, 4), min_size=A.shape[1], max_size=A.shape[1])))
    b = F5.matmul(A, x)
    sol = linalg.solve(A, b, F5)
    assert sol is not None and np.array_equal(F5.matmul(A, sol), b)


def test_rational_rref():
    A = Q.array([[1, 2], [2, 4], [Fraction(1, 3), 1]])
    R, piv = linalg.rref(A, Q)
    assert piv == [0, 1]
    assert linalg.rank(A, Q) == 2


# ---------------------------------------------------------------------------
# build_algebra


def test_dual_numbers(kr):
    assert kr.dim == 2
    assert kr.loewy_length == 2
    assert kr.labels[(1, 1)] == ["e1", "a"]


def test_n23_basis(n23):
    # oracle: paths of length < 3 on the 2-cycle
    assert n23.dim == 6
    for key, d in nakayama_block_dims(2, 3).items():
        assert n23.dims[key] == d
    assert n23.labels[(1, 1)] == ["e1", "a*b"]
    assert n23.labels[(1, 2)] == ["a"]


def test_wsa_dimension_matches_oracle(wsa, wsa_pres):
    dim, D, blocks = path_algebra_dimension(wsa_pres.to_json())
    assert wsa.dim == dim == 60
    for key, d in blocks.items():
        assert wsa.dims[key] == d


@pytest.mark.parametrize("n,ell", [(1, 2), (1, 4), (2, 3), (3, 4), (2, 5), (3, 2)])
def test_nakayama_dims_match_oracle(n, ell):
    alg = build_algebra(symmetric_nakayama(NakayamaParams(n, ell)))
    assert alg.cartan().tolist() == [[nakayama_block_dims(n, ell).get((i, j), 0) for j in range(1, n + 1)]
                                     for i in range(1, n + 1)]


def test_multiply(n23):
    a, b = n23.arrow("a"), n23.arrow("b")
    assert multiply(n23.e(1), a) == a
    assert multiply(a, b) == n23.path_element(["a", "b"])
    assert multiply(a, multiply(b, a)).is_zero()
    with pytest.raises(VertexMismatch):
        multiply(a, a)


def test_not_admissible():
    p = pres(1, [("x", 1, 1), ("y", 1, 1)], [[(1, ("x", "y")), (-1, ("y", "x"))]])
    with pytest.raises(NotAdmissible):
        build_algebra(p, degree_cap=8)


def test_disconnected():
    with pytest.raises(Disconnected):
        build_algebra(pres(2, [("x", 1, 1)], [[(1, ("x", "x"))]]))


def test_zero_relation():
    p = pres(1, [("x", 1, 1)], [[(1, ("x", "x")), (-1, ("x", "x"))]])
    with pytest.raises(ZeroRelationDegenerate):
        build_algebra(p)


def test_degree_cap_independence(wsa_pres, wsa):
    other = build_algebra(wsa_pres, degree_cap=35)
    assert other.labels == wsa.labels


def test_radical_layers_sum_to_dimension(wsa, n23):
    for alg in (wsa, n23):
        assert sum(sum(v) for v in alg.radical_layer_dims().values()) == alg.dim


def test_gabriel_quiver_recovered(wsa, wsa_pres):
    layers = wsa.radical_layer_dims()
    counts = wsa_pres.quiver.arrow_counts()
    for (i, j), dims in layers.items():
        assert (dims[1] if len(dims) > 1 else 0) == counts[i - 1, j - 1]


def test_associativity(n23, wsa):
    assert n23.check_associative()
    assert wsa.check_associative(max_triples=3000)


def test_symmetric_forms(kr, n23, wsa):
    for alg in (kr, n23, wsa):
        assert alg.check_symmetric() is not None


def test_symmetric_form_kr(kr):
    lam = kr.check_symmetric()
    assert lam(kr.e(1)) == 0 and lam(kr.arrow("a")) != 0


def test_non_symmetric_nakayama():
    alg = build_algebra(symmetric_nakayama(NakayamaParams(2, 2)))
    assert alg.nakayama_permutation() == {1: 2, 2: 1}
    assert alg.check_symmetric() is None
    with pytest.raises(NotWeaklySymmetric):
        alg.socle_generator(1)


def test_not_self_injective():
    alg = build_algebra(pres(2, [("x", 1, 2)], []))
    with pytest.raises(NotSelfInjective):
        alg.nakayama_permutation()


def test_socle_generators(kr, n23, wsa):
    assert kr.label(1, 1, kr.socle_generator(1).vec) == "a"
    assert n23.label(1, 1, n23.socle_generator(1).vec) == "a*b"
    w = wsa.socle_generator(1)
    # the socle of P_1 is the top degree of e_1 Λ e_1
    assert int(wsa.degrees[(1, 1)][np.flatnonzero(w.vec)].min()) == wsa.loewy_length - 1
    assert wsa.nakayama_permutation() == {i: i for i in wsa.vertices}


def test_json_round_trip(wsa_pres, tmp_path):
    text = wsa_pres.dumps()
    again = AlgebraPresentation.loads(text)
    assert again.dumps() == text
    assert json.loads(text)["field"] == {"prime": 5}


def test_rational_field_algebra():
    alg = build_algebra(symmetric_nakayama(NakayamaParams(2, 3, None)))
    assert alg.dim == 6 and alg.field == Q


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(2, 5))
def test_nakayama_symmetric_iff_congruence(n, ell):
    alg = build_algebra(symmetric_nakayama(NakayamaParams(n, ell)))
    assert (alg.check_symmetric() is not None) == ((ell - 1) % n == 0)
