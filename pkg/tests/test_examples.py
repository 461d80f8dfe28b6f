from __future__ import annotations

import itertools

import pytest

from sforge.algebra import build_algebra
from sforge.examples import (InvalidWeights, MetadataMissing, NakayamaParams, WSAParams, classify_loops,
                             symmetric_nakayama, weighted_surface_example)
from sforge.representations import period_of_simple

from oracles import path_algebra_dimension

GRID = list(itertools.product((1, 2), (2, 3), (3, 4)))


@pytest.mark.parametrize("m,n,p", GRID)
def test_wsa_grid(m, n, p):
    pres = weighted_surface_example(WSAParams(m, n, p))
    alg = build_algebra(pres)
    if m == 1:
        # the naive oracle is too slow at the Loewy length of the m = 2 instances
        assert alg.dim == path_algebra_dimension(pres.to_json())[0]
    assert alg.check_symmetric() is not None
    assert alg.cartan().tolist() == alg.cartan().T.tolist()
    assert [period_of_simple(alg, i) for i in alg.vertices] == [4] * 5


def test_bundled_instance(wsa):
    assert wsa.dim == 60 and wsa.n == 5
    assert wsa.presentation.meta["params"]["b"] == 0


@pytest.mark.parametrize("bad", [dict(p=2), dict(m=0), dict(n=0), dict(a=0), dict(d=5)])
def test_invalid_weights(bad):
    with pytest.raises(InvalidWeights):
        weighted_surface_example(WSAParams(**bad))


def test_n1_needs_flag():
    with pytest.raises(InvalidWeights):
        weighted_surface_example(WSAParams(n=1))
    pres = weighted_surface_example(WSAParams(n=1, allow_n1=True))
    ids = {a.id for a in pres.quiver.arrows}
    assert "xi" not in ids and "mu" not in ids
    alg = build_algebra(pres)
    assert alg.check_symmetric() is not None


def test_deformation_changes_only_the_loop_relation():
    r0 = weighted_surface_example(WSAParams(b=0)).relations
    r1 = weighted_surface_example(WSAParams(b=1)).relations
    assert len(r0) == len(r1)
    changed = [k for k, (x, y) in enumerate(zip(r0, r1)) if x.terms != y.terms]
    assert len(changed) == 1
    extra = [t for t in r1[changed[0]].terms if t not in r0[changed[0]].terms]
    assert r0[changed[0]].terms[0][1] == ("rho", "rho")
    assert len(extra) == 1 and extra[0][1][0] == "rho" and len(extra[0][1]) == 7


def test_deformed_algebra_has_same_dimension(wsa):
    alg = build_algebra(weighted_surface_example(WSAParams(b=1)))
    assert alg.dim == wsa.dim and alg.check_symmetric() is not None


def test_rational_variant():
    alg = build_algebra(weighted_surface_example(WSAParams(prime=None)))
    assert alg.dim == 60


def test_classify_loops(wsa_pres, wsa, n23_pres):
    kinds = classify_loops(wsa_pres)
    assert kinds == {1: "border", 2: "none", 3: "none", 4: "none", 5: "self-folded"}
    assert classify_loops(wsa) == kinds
    with pytest.raises(MetadataMissing):
        classify_loops(n23_pres)


def test_orbit_metadata(wsa_pres):
    meta = wsa_pres.meta
    ids = {a.id for a in wsa_pres.quiver.arrows}
    for key in ("f_orbits", "g_orbits"):
        flat = [x for orb in meta[key] for x in orb]
        assert sorted(flat) == sorted(ids)
    # f-orbits have length 3 or 1
    assert sorted(len(o) for o in meta["f_orbits"]) == [1, 3, 3, 3]


def test_metadata_survives_json(wsa_pres):
    from sforge.algebra import AlgebraPresentation
    again = AlgebraPresentation.loads(wsa_pres.dumps())
    assert classify_loops(again) == classify_loops(wsa_pres)


@pytest.mark.parametrize("n,ell", [(1, 2), (2, 3), (3, 4), (4, 5)])
def test_nakayama(n, ell):
    pres = symmetric_nakayama(NakayamaParams(n, ell))
    assert len(pres.relations) == n
    alg = build_algebra(pres)
    assert alg.dim == n * ell
    assert alg.check_symmetric() is not None


def test_nakayama_guards():
    with pytest.raises(InvalidWeights):
        symmetric_nakayama(NakayamaParams(0, 3))
    with pytest.raises(InvalidWeights):
        symmetric_nakayama(NakayamaParams(2, 1))
