from __future__ import annotations

import copy

import pytest
from hypothesis import given, settings, strategies as st

from sforge.algebra import build_algebra
from sforge.endo import endo_algebra, present
from sforge.equivalence import (CertificateError, Distinct, HypothesisNotMet, IsoBudget, Inconclusive, Isomorphic,
                                PhiVerificationFailed, SocleEquivalentAt, construct_phi, invariants, iso_search,
                                socle_equivalence_search, socle_quotient, socle_quotient_at, verify_certificate,
                                verify_phi)
from sforge.examples import NakayamaParams, WSAParams, symmetric_nakayama, weighted_surface_example
from sforge.mutation import build_addq_resolution, from_projective_resolution, mutate


def test_invariants_n23(n23):
    inv = invariants(n23)
    assert inv.dim == 6 and inv.vertices == 2 and inv.loewy_length == 3
    assert inv.cartan == ((2, 1), (1, 2))
    assert inv.to_json()["cartan"] == [[2, 1], [1, 2]]


def test_distinct_reports_first_invariant(n23, kr):
    v = iso_search(n23, kr)
    assert isinstance(v, Distinct)
    assert v.witness == {"invariant": "dim", "left": 6, "right": 2}
    assert not v.holds


def test_socle_quotient_dims(kr, n23, wsa):
    assert socle_quotient_at(n23, 1).dim == 5
    assert socle_quotient(n23).dim == 4
    assert socle_quotient(kr).dim == 1
    assert socle_quotient_at(wsa, 1).dim == wsa.dim - 1
    assert socle_quotient(wsa).dim == wsa.dim - wsa.n


def test_iterated_quotients_agree(n23):
    # dividing out one socle at a time ends at the full socle quotient
    step = socle_quotient_at(socle_quotient_at(n23, 1), 2)
    assert isinstance(iso_search(step, socle_quotient(n23)), Isomorphic)


def test_identity_is_found(n23, wsa):
    for alg in (n23, wsa):
        v = iso_search(alg, alg)
        assert isinstance(v, Isomorphic) and v.certificate["phase"] == "monomial"
        assert verify_certificate(v, alg, alg)


def test_double_mutation_at_5_is_isomorphic(wsa):
    P = present(wsa, mutate(wsa, 5, 2).summands())
    v = iso_search(P.algebra, wsa)
    assert isinstance(v, Isomorphic)
    assert verify_certificate(v, P.algebra, wsa)


def test_socle_deformation_invisible_mod_socle(wsa):
    deformed = build_algebra(weighted_surface_example(WSAParams(b=1)))
    v = socle_equivalence_search(wsa, deformed, 1)
    assert isinstance(v, SocleEquivalentAt) and v.vertex == 1
    assert verify_certificate(v, wsa, deformed)


def test_tampered_certificate_rejected(n23):
    v = iso_search(n23, n23)
    bad = copy.deepcopy(v.certificate)
    # a -> 2a still kills the relations but no longer inverts the backward map
    bad["images"]["a"] = [[2, ["a"]]]
    with pytest.raises(CertificateError):
        verify_certificate(Isomorphic(bad), n23, n23)
    bad = copy.deepcopy(v.certificate)
    bad["permutation"] = {"1": 1, "2": 1}
    with pytest.raises(CertificateError):
        verify_certificate(Isomorphic(bad), n23, n23)


def test_budget_exhaustion_is_inconclusive(wsa):
    P = present(wsa, mutate(wsa, 1, 2).summands())
    v = iso_search(P.algebra, wsa, budget=IsoBudget(max_nodes=1))
    assert isinstance(v, Inconclusive) and not v.holds
    assert any("budget" in line for line in v.log)
    assert isinstance(iso_search(P.algebra, wsa), Isomorphic)


@pytest.mark.parametrize("i", [1, 2])
def test_phi_agrees_with_iso_search(n23, i):
    res = from_projective_resolution(n23, i)
    E = endo_algebra(n23, res.state().summands())
    v = construct_phi(n23, res, E)
    assert v.vertex == i and v.certificate["method"] == "phi"
    assert verify_certificate(v, n23, None, endo=E)
    P = present(n23, res.state().summands())
    assert isinstance(iso_search(P.algebra, n23), Isomorphic)


def test_phi_certificate_needs_endo(n23):
    v = construct_phi(n23, from_projective_resolution(n23, 1))
    with pytest.raises(CertificateError):
        verify_certificate(v, n23, None)


def test_phi_at_loop_free_wsa_vertex(wsa):
    res = from_projective_resolution(wsa, 3)
    E = endo_algebra(wsa, res.state().summands())
    v = construct_phi(wsa, res, E)
    assert verify_phi(wsa, E, v.certificate)


def test_corrupted_phi_block_is_caught(n23):
    # products are checked exactly outside the (i, i) block
    res = from_projective_resolution(n23, 1)
    E = endo_algebra(n23, res.state().summands())
    cert = copy.deepcopy(construct_phi(n23, res, E).certificate)
    rows = cert["blocks"]["2,1"]
    rows[0][0] = (rows[0][0] + 1) % 5
    with pytest.raises(PhiVerificationFailed):
        verify_phi(n23, E, cert)


def test_phi_hypothesis_not_met(wsa):
    with pytest.raises(HypothesisNotMet):
        construct_phi(wsa, build_addq_resolution(wsa, 5))
    with pytest.raises(HypothesisNotMet):
        construct_phi(wsa, build_addq_resolution(wsa, 5, max_len=1))


@settings(max_examples=6, deadline=None)
@given(st.sampled_from([(2, 3), (3, 4), (1, 3), (2, 5)]))
def test_isomorphism_is_reflexive_on_nakayama(params):
    alg = build_algebra(symmetric_nakayama(NakayamaParams(*params)))
    v = iso_search(alg, alg)
    assert isinstance(v, Isomorphic) and verify_certificate(v, alg, alg)
