"""Generators for the bundled test algebras."""

from __future__ import annotations

import string
from dataclasses import dataclass, asdict

from .algebra import AlgebraPresentation, Arrow, Quiver, Relation, AlgebraError
from .field import parse_field


class InvalidWeights(AlgebraError):
    pass


class MetadataMissing(AlgebraError):
    pass


# The triangulation quiver with one border loop (rho at 1) and one self-folded
# triangle (sigma at 5).
WSA_ARROWS = [
    ("alpha", 1, 3), ("xi", 3, 4), ("delta", 4, 1), ("mu", 4, 3), ("beta", 3, 2),
    ("nu", 2, 4), ("epsilon", 2, 5), ("sigma", 5, 5), ("eta", 5, 2), ("rho", 1, 1),
]
WSA_F_ORBITS = [["alpha", "xi", "delta"], ["mu", "beta", "nu"], ["epsilon", "sigma", "eta"], ["rho"]]
WSA_G_ORBITS = [["alpha", "beta", "epsilon", "eta", "nu", "delta", "rho"], ["xi", "mu"], ["sigma"]]


def _orbit_map(orbits):
    out = {}
    for orb in orbits:
        for k, a in enumerate(orb):
            out[a] = orb[(k + 1) % len(orb)]
    return out


@dataclass(frozen=True)
class WSAParams:
    m: int = 1
    n: int = 2
    p: int = 3
    a: int | str = 1
    c: int | str = 1
    d: int | str = 1
    b: int | str = 0
    prime: int | None = 5  # None means rational coefficients
    allow_n1: bool = False


@dataclass(frozen=True)
class NakayamaParams:
    n: int = 2
    ell: int = 3
    prime: int | None = 5


def _field_spec(prime):
    return "rational" if prime is None else {"prime": prime}


def _neg(F, c):
    if isinstance(c, int):
        return -c
    return F.to_json(F.neg(F.elem(c)))


def weighted_surface_example(params: WSAParams = WSAParams()) -> AlgebraPresentation:
    """The weighted surface algebra on the five-vertex triangulation quiver.

    Weights are constant on g-orbits: ``m`` on the long orbit through alpha,
    ``n`` on (xi mu) and ``p`` on (sigma); ``a, c, d`` are the matching
    parameters and ``b`` is the border (socle) deformation at vertex 1.
    """
    P = params
    if P.m < 1 or P.n < 1 or P.p < 3:
        raise InvalidWeights(f"need m >= 1, n >= 1, p >= 3; got {(P.m, P.n, P.p)}")
    if P.n == 1 and not P.allow_n1:
        raise InvalidWeights("n = 1 removes xi and mu from the Gabriel quiver; pass allow_n1 to use that variant")
    fspec = _field_spec(P.prime)
    F = parse_field(fspec)
    for name in ("a", "c", "d"):
        if F.elem(getattr(P, name)) == F.zero:
            raise InvalidWeights(f"parameter {name} must be nonzero")

    f = _orbit_map(WSA_F_ORBITS)
    g = _orbit_map(WSA_G_ORBITS)
    weight, coeff = {}, {}
    for orb, w, c in zip(WSA_G_ORBITS, (P.m, P.n, P.p), (P.a, P.c, P.d)):
        for x in orb:
            weight[x], coeff[x] = w * len(orb), c
    src = {a: s for a, s, _ in WSA_ARROWS}
    bar = {a: next(b for b, s, _ in WSA_ARROWS if s == src[a] and b != a) for a, *_ in WSA_ARROWS}

    def A(theta):
        path = [theta]
        while len(path) < weight[theta] - 1:
            path.append(g[path[-1]])
        return path

    rels = []
    for theta, *_ in WSA_ARROWS:
        tb = bar[theta]
        terms = [(1, [theta, f[theta]]), (_neg(F, coeff[tb]), A(tb))]
        if theta == "rho" and F.elem(P.b) != F.zero:
            cyc = ["rho", "alpha", "beta", "epsilon", "eta", "nu", "delta"] * P.m
            terms.append((_neg(F, P.b), cyc))
        rels.append(terms)
    zero = []
    for w, *_ in WSA_ARROWS:
        for path in ([w, f[w], g[f[w]]], [w, g[w], f[g[w]]]):
            if path not in zero:
                zero.append(path)
    rels.extend([(1, z)] for z in zero)

    arrows = list(WSA_ARROWS)
    if P.n == 1:
        subst = {"mu": ["delta", "alpha"], "xi": ["beta", "nu"]}
        rels = [r for r in rels if not (len(r) == 2 and r[0][1] in (["delta", "alpha"], ["beta", "nu"]))]
        skip1, skip2 = {"beta", "delta"}, {"alpha", "nu"}
        rels = [r for r in rels if not (len(r) == 1 and (
            (r[0][1] == [r[0][1][0], f[r[0][1][0]], g[f[r[0][1][0]]]] and r[0][1][0] in skip1)
            or (r[0][1] == [r[0][1][0], g[r[0][1][0]], f[g[r[0][1][0]]]] and r[0][1][0] in skip2)))]
        rels = [[(c, [y for x in path for y in subst.get(x, [x])]) for c, path in r] for r in rels]
        arrows = [a for a in arrows if a[0] not in subst]

    quiver = Quiver(5, [Arrow(*a) for a in arrows])
    meta = {
        "generator": "weighted_surface",
        "params": asdict(P),
        "f_orbits": WSA_F_ORBITS,
        "g_orbits": WSA_G_ORBITS,
        "border_loops": ["rho"],
        "self_folded_loops": ["sigma"],
    }
    return AlgebraPresentation(
        F, quiver, [Relation([(c, tuple(p)) for c, p in r]) for r in rels], meta=meta, field_raw=fspec)


def _nakayama_names(n):
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"a{k}" for k in range(1, n + 1)]


def symmetric_nakayama(params: NakayamaParams = NakayamaParams()) -> AlgebraPresentation:
    """Cyclic quiver 1 -> 2 -> ... -> n -> 1 modulo all paths of length ell."""
    n, ell = params.n, params.ell
    if n < 1 or ell < 2:
        raise InvalidWeights("need n >= 1 and ell >= 2")
    fspec = _field_spec(params.prime)
    F = parse_field(fspec)
    names = _nakayama_names(n)
    arrows = [Arrow(names[k], k + 1, (k + 1) % n + 1) for k in range(n)]
    rels = [Relation([(1, tuple(names[(s + t) % n] for t in range(ell)))]) for s in range(n)]
    meta = {"generator": "nakayama", "params": asdict(params)}
    return AlgebraPresentation(F, Quiver(n, arrows), rels, meta=meta, field_raw=fspec)


def classify_loops(pres) -> dict:
    """Loop type per vertex: 'border', 'self-folded' or 'none'."""
    pres = getattr(pres, "presentation", pres)
    meta = pres.meta or {}
    if "border_loops" not in meta or "self_folded_loops" not in meta:
        raise MetadataMissing("loop classification needs weighted-surface generator metadata")
    kind = {v: "none" for v in pres.quiver.vertices}
    for a in pres.quiver.loops():
        if a.id in meta["border_loops"]:
            kind[a.source] = "border"
        elif a.id in meta["self_folded_loops"]:
            kind[a.source] = "self-folded"
    return kind
