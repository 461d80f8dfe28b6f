"""Isomorphism and socle-equivalence verdicts with re-verifiable certificates.

Algebra isomorphism is searched for, not decided: ``iso_search`` screens by
invariants, enumerates vertex bijections compatible with the radical layers,
and then looks for an arrow substitution ``x_a -> sum c x_b + higher terms``
killing every relation.  The higher terms are solved for degree by degree.
Whatever is found is checked again from the certificate alone.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from . import linalg
from .algebra import (
    AlgebraError,
    AlgebraPresentation,
    NotWeaklySymmetric,
    PresentationError,
    Quiver,
    Relation,
    build_algebra,
    coeff_raw,
    make_path,
    path_target,
)
from .complexes import ChainMap
from .endo import endo_algebra, radical_and_quiver
from .projmap import ProjMap, postcompose_matrix


class PhiVerificationFailed(AlgebraError):
    """The comparison map is not multiplicative modulo the socle line (carries the failing pair)."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class HypothesisNotMet(AlgebraError):
    pass


class CertificateError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class Isomorphic:
    certificate: dict
    kind = "Isomorphic"
    holds = True

    def to_json(self):
        return {"verdict": self.kind, "certificate": self.certificate}


@dataclass
class SocleEquivalentAt:
    vertex: int
    certificate: dict
    kind = "SocleEquivalentAt"
    holds = True

    def to_json(self):
        return {"verdict": self.kind, "vertex": self.vertex, "certificate": self.certificate}


@dataclass
class Distinct:
    witness: dict
    kind = "Distinct"
    holds = False

    def to_json(self):
        return {"verdict": self.kind, "witness": self.witness}


@dataclass
class Inconclusive:
    log: list
    kind = "Inconclusive"
    holds = False

    def to_json(self):
        return {"verdict": self.kind, "log": list(self.log)}


def _as_algebra(x):
    if isinstance(x, AlgebraPresentation):
        return build_algebra(x)
    inner = getattr(x, "algebra", None)
    if inner is not None and hasattr(inner, "presentation"):
        return inner
    if not hasattr(x, "presentation"):
        raise TypeError("a presented algebra is required")
    return x


# ---------------------------------------------------------------------------
# invariants


@dataclass(frozen=True)
class Invariants:
    field: str
    dim: int
    vertices: int
    loewy_length: int
    cartan: tuple
    layers: tuple  # canonical radical-layer dimensions of the blocks
    center_dim: int

    def to_json(self):
        d = asdict(self)
        d["cartan"] = [list(r) for r in self.cartan]
        d["layers"] = [[list(c) for c in r] for r in self.layers]
        return d

    def first_difference(self, other):
        for name in ("field", "dim", "vertices", "loewy_length", "cartan", "layers", "center_dim"):
            if getattr(self, name) != getattr(other, name):
                return name
        return None


def _layer_table(alg):
    ll = alg.loewy_length
    return {key: tuple(int(np.sum(deg == k)) for k in range(ll)) for key, deg in alg.degrees.items()}


def _canonical_layers(alg):
    lay = _layer_table(alg)
    V = list(alg.vertices)

    def table(order):
        return tuple(tuple(lay[(a, b)] for b in order) for a in order)

    if len(V) <= 7:
        best = min(table(order) for order in itertools.permutations(V))
    else:
        # cheap fallback: sort vertices by their row and column signatures
        sig = {a: (sorted(lay[(a, b)] for b in V), sorted(lay[(b, a)] for b in V), lay[(a, a)]) for a in V}
        best = table(sorted(V, key=lambda a: sig[a]))
    return best


def invariants(alg) -> Invariants:
    """Isomorphism invariants; the Cartan matrix and layers are in a canonical vertex order."""
    layers = _canonical_layers(alg)
    cartan = tuple(tuple(sum(c) for c in row) for row in layers)
    return Invariants(repr(alg.field), int(alg.dim), int(alg.n), int(alg.loewy_length), cartan, layers,
                      int(alg.center_dim()))


# ---------------------------------------------------------------------------
# socle quotients


def _socle_relation(alg, i):
    soc = alg.socle(i)
    if len(soc) != 1 or soc[0][0] != i:
        raise NotWeaklySymmetric(f"soc(P_{i}) is not a copy of the simple module at {i}")
    vec = soc[0][1]
    F = alg.field
    nz = np.flatnonzero(np.asarray(vec != 0, dtype=bool))
    vec = F.norm(vec * F.inv(vec[nz[0]]))
    terms = []
    for k, c in enumerate(vec):
        if c != 0:
            p = alg.paths[(i, i)][k]
            terms.append((coeff_raw(F, c), tuple(alg.quiver.arrows[a].id for a in p[1])))
    return terms


def _quotient(alg, vertices):
    alg = _as_algebra(alg)
    pres = alg.presentation
    extra = [_socle_relation(alg, i) for i in vertices]
    quiver, rels = pres.quiver, list(pres.relations)
    drop = set()
    for terms in extra:
        if all(len(ids) >= 2 for _, ids in terms):
            rels.append(Relation(terms))
        elif len(terms) == 1:
            # radical square zero: the socle is an arrow, which simply disappears
            drop.add(terms[0][1][0])
        else:
            raise PresentationError("socle generator mixes arrows with longer paths")
    if drop:
        quiver = Quiver(quiver.n, [a for a in quiver.arrows if a.id not in drop])
        rels = [r for r in rels if not any(x in drop for _, ids in r.terms for x in ids)]
    new = AlgebraPresentation(pres.field, quiver, rels, meta=dict(pres.meta), field_raw=pres.field_raw)
    return build_algebra(new)


def socle_quotient_at(alg, i):
    """The quotient by soc(P_i) (requires soc(P_i) simple with top vertex i)."""
    return _quotient(alg, [i])


def socle_quotient(alg):
    alg = _as_algebra(alg)
    if not alg.is_weakly_symmetric():
        raise NotWeaklySymmetric("socle_quotient needs a weakly symmetric algebra")
    return _quotient(alg, list(alg.vertices))


# ---------------------------------------------------------------------------
# substitutions


def _relation_data(alg, perm):
    """Relations of ``alg`` as (source, target, [(coeff, arrow indices)])."""
    q = alg.quiver
    out = []
    for poly in alg.presentation.relation_polys():
        p0 = next(iter(poly))
        s, t = p0[0], path_target(q, p0)
        out.append((s, t, [(c, p[1]) for p, c in poly.items()]))
    return out


def _apply(X, quiver, images, perm, s, ids):
    """Image of the path (s, ids) of ``quiver`` in X under the arrow images."""
    if not ids:
        return X.unit(perm[s])
    a0 = quiver.arrows[ids[0]]
    cur, end = images[ids[0]], perm[a0.target]
    for k in ids[1:]:
        t = perm[quiver.arrows[k].target]
        cur = X.mul(perm[s], end, t, cur, images[k])
        end = t
    return cur


def _apply_poly(X, quiver, images, perm, s, t, terms):
    F = X.field
    acc = X.zero(perm[s], perm[t])
    for c, ids in terms:
        acc = F.norm(acc + F.norm(c * _apply(X, quiver, images, perm, s, ids)))
    return acc


def _terms_of(alg, i, j, vec):
    F = alg.field
    out = []
    for k, c in enumerate(vec):
        if c != 0:
            p = alg.paths[(i, j)][k]
            out.append([coeff_raw(F, c), [alg.quiver.arrows[a].id for a in p[1]]])
    return out


def _vec_of(alg, i, j, terms):
    F = alg.field
    v = alg.zero(i, j)
    q = alg.quiver
    for c, ids in terms:
        p = make_path(q, ids, source=i) if ids else (i, ())
        if p[0] != i or path_target(q, p) != j:
            raise CertificateError(f"path {ids} does not lie in block ({i}, {j})")
        k = alg.path_index[(i, j)].get(p)
        if k is None:
            # not a basis path: reduce it
            v = F.norm(v + F.norm(F.elem(c) * alg._path_vec(i, j, p)))
        else:
            v[k] = F.add(v[k], F.elem(c))
    return v


def _image_matrices(A, B, images, perm):
    """Per-block matrices of the induced map A -> B on the path bases."""
    F = A.field
    mats = {}
    for i in A.vertices:
        for j in A.vertices:
            cols = [_apply(B, A.quiver, images, perm, p[0], p[1]) for p in A.paths[(i, j)]]
            mats[(i, j)] = (np.stack(cols, axis=1) if cols
                            else F.zeros((B.dims[(perm[i], perm[j])], 0)))
    return mats


def _certificate(A, B, perm, images):
    inv_perm = {v: k for k, v in perm.items()}
    mats = _image_matrices(A, B, images, perm)
    inverse = {}
    for b in B.quiver.arrows:
        i, j = inv_perm[b.source], inv_perm[b.target]
        Minv = linalg.inverse(mats[(i, j)], A.field)
        if Minv is None:
            raise CertificateError(f"substitution is not bijective on block ({i}, {j})")
        k = B.path_index[(b.source, b.target)][make_path(B.quiver, [b.id])]
        inverse[b.id] = _terms_of(A, i, j, Minv[:, k])
    fwd, parts = {}, {}
    for a, arr in enumerate(A.quiver.arrows):
        s, t = perm[arr.source], perm[arr.target]
        fwd[arr.id] = _terms_of(B, s, t, images[a])
        by_deg = {}
        for c, ids in fwd[arr.id]:
            by_deg.setdefault(str(len(ids)), []).append([c, ids])
        parts[arr.id] = by_deg
    return {
        "permutation": {str(k): int(v) for k, v in sorted(perm.items())},
        "images": fwd,
        "inverse_images": inverse,
        "degree_parts": parts,
    }


def verify_isomorphism(A, B, cert) -> bool:
    """Re-check an isomorphism certificate from scratch; raises CertificateError on failure.

    Both substitutions must kill the other side's relations and compose to the
    identity on arrows, so they are mutually inverse algebra maps.
    """
    A, B = _as_algebra(A), _as_algebra(B)
    perm = {int(k): int(v) for k, v in cert["permutation"].items()}
    if sorted(perm) != list(A.vertices) or sorted(perm.values()) != list(B.vertices):
        raise CertificateError("vertex map is not a bijection")
    inv_perm = {v: k for k, v in perm.items()}

    def images_of(src, dst, table, pm):
        out = {}
        for a, arr in enumerate(src.quiver.arrows):
            if arr.id not in table:
                raise CertificateError(f"no image for arrow {arr.id}")
            out[a] = _vec_of(dst, pm[arr.source], pm[arr.target], table[arr.id])
        return out

    fwd = images_of(A, B, cert["images"], perm)
    bwd = images_of(B, A, cert["inverse_images"], inv_perm)
    for X, Y, img, pm in ((A, B, fwd, perm), (B, A, bwd, inv_perm)):
        for s, t, terms in _relation_data(X, pm):
            if not linalg.is_zero(_apply_poly(Y, X.quiver, img, pm, s, t, terms)):
                raise CertificateError(f"a relation at ({s}, {t}) is not preserved")
    for X, Y, img, back, pm, qm in ((A, B, fwd, bwd, perm, inv_perm), (B, A, bwd, fwd, inv_perm, perm)):
        for a, arr in enumerate(X.quiver.arrows):
            s, t = pm[arr.source], pm[arr.target]
            v = img[a]
            acc = X.zero(arr.source, arr.target)
            for k, c in enumerate(v):
                if c != 0:
                    p = Y.paths[(s, t)][k]
                    acc = X.field.norm(acc + c * _apply(X, Y.quiver, back, qm, p[0], p[1]))
            expect = X.path_element([arr.id]).vec
            if not linalg.is_zero(X.field.norm(acc - expect)):
                raise CertificateError(f"substitutions are not inverse on arrow {arr.id}")
    return True


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class IsoBudget:
    max_nodes: int = 200_000  # search-tree nodes over all vertex maps and phases
    retries: int = 3  # alternative solutions tried when a correction stage fails
    seed: int = 0


class _OutOfBudget(Exception):
    pass


def _scalars(F):
    if getattr(F, "is_prime", False):
        out = []
        for k in range(1, F.p // 2 + 1):
            out.append(F.elem(k))
            if F.elem(-k) != F.elem(k):
                out.append(F.elem(-k))
        return out
    return [F.elem(x) for x in (1, -1, 2, -2, "1/2", "-1/2", 3, -3)]


def _vertex_maps(A, B):
    la, lb = _layer_table(A), _layer_table(B)
    VA, VB = list(A.vertices), list(B.vertices)
    if len(VA) != len(VB):
        return

    def extend(assign, used):
        k = len(assign)
        if k == len(VA):
            yield dict(zip(VA, assign))
            return
        a = VA[k]
        for b in VB:
            if b in used or la[(a, a)] != lb[(b, b)]:
                continue
            if all(la[(a, VA[r])] == lb[(b, assign[r])] and la[(VA[r], a)] == lb[(assign[r], b)]
                   for r in range(k)):
                yield from extend(assign + [b], used | {b})

    yield from extend([], frozenset())


class _Search:
    def __init__(self, A, B, perm, budget, counter, log):
        self.A, self.B, self.perm, self.budget = A, B, perm, budget
        self.counter, self.log = counter, log
        self.F = A.field
        self.rels = _relation_data(A, perm)
        self.arrows = list(A.quiver.arrows)
        self.blocks = [(perm[a.source], perm[a.target]) for a in self.arrows]
        self.deg = {key: np.asarray(B.degrees[key]) for key in B.degrees}
        self.deg1 = [list(np.flatnonzero(self.deg[blk] == 1)) for blk in self.blocks]
        self.rng = np.random.default_rng(budget.seed)
        self.order, self.check_full, self.check_low = self._plan()
        self.gauge = self._gauge_arrows()

    def _tick(self):
        self.counter[0] += 1
        if self.counter[0] > self.budget.max_nodes:
            raise _OutOfBudget

    def _plan(self):
        rel_arrows = [set(k for _, ids in terms for k in ids) for _, _, terms in self.rels]
        low_arrows = [set(k for _, ids in terms if len(ids) == 2 for k in ids) for _, _, terms in self.rels]
        order, seen = [], set()
        pending = list(range(len(self.rels)))
        while pending:
            r = min(pending, key=lambda x: (len(rel_arrows[x] - seen), x))
            pending.remove(r)
            for k in sorted(rel_arrows[r] - seen):
                order.append(k)
                seen.add(k)
        order += [k for k in range(len(self.arrows)) if k not in seen]
        pos = {k: d for d, k in enumerate(order)}
        full, low = {}, {}
        for r in range(len(self.rels)):
            full.setdefault(max((pos[k] for k in rel_arrows[r]), default=0), []).append(r)
            if low_arrows[r]:
                low.setdefault(max(pos[k] for k in low_arrows[r]), []).append(r)
        return order, full, low

    def _gauge_arrows(self):
        """One arrow per edge of a spanning tree; conjugation by vertex scalars normalises these."""
        parent = {v: v for v in self.A.vertices}

        def root(v):
            while parent[v] != v:
                v = parent[v]
            return v

        out = set()
        for k, a in enumerate(self.arrows):
            x, y = root(a.source), root(a.target)
            if x != y:
                parent[x] = y
                out.add(k)
        return out

    def _candidates(self, k, mode, taken):
        F = self.F
        slots = self.deg1[k]
        d = self.B.dims[self.blocks[k]]
        scalars = [F.one] if k in self.gauge else _scalars(F)
        if mode != "general":
            for s in slots:
                if s in taken:
                    continue
                for c in scalars:
                    v = F.zeros(d)
                    v[s] = c
                    yield v, s
            return
        elems = list(F.nonzero_elements()) if getattr(F, "is_prime", False) else _scalars(F)
        allv = [F.zero] + elems
        for combo in itertools.product(allv, repeat=len(slots)):
            nz = [c for c in combo if c != F.zero]
            if not nz or (k in self.gauge and nz[0] != F.one):
                continue
            v = F.zeros(d)
            for s, c in zip(slots, combo):
                v[s] = c
            yield v, None

    def _bundle_ok(self, V, k, assigned):
        blk = self.blocks[k]
        same = [j for j in assigned if self.blocks[j] == blk and j != k] + [k]
        if len(same) < len(self.deg1[k]):
            rows = np.array([V[j][self.deg1[k]] for j in same], dtype=self.F.dtype)
            return linalg.rank(rows, self.F) == len(same)
        rows = np.array([V[j][self.deg1[k]] for j in same], dtype=self.F.dtype)
        return linalg.is_invertible(rows, self.F)

    def _rel_value(self, V, r):
        s, t, terms = self.rels[r]
        return _apply_poly(self.B, self.A.quiver, V, self.perm, s, t, terms)

    def _low_ok(self, V, r):
        s, t, _ = self.rels[r]
        val = self._rel_value(V, r)
        mask = self.deg[(self.perm[s], self.perm[t])] <= 2
        return linalg.is_zero(val[mask])

    def run(self, mode):
        F = self.F
        V = {k: self.B.zero(*self.blocks[k]) for k in range(len(self.arrows))}

        def dfs(depth, assigned, taken):
            self._tick()
            if depth == len(self.order):
                if mode == "monomial":
                    return dict(V)
                return self._lift(2, dict(V))
            k = self.order[depth]
            for v, slot in self._candidates(k, "general" if mode == "general" else "monomial",
                                            taken.get(self.blocks[k], set())):
                V[k] = v
                if not self._bundle_ok(V, k, assigned):
                    continue
                checks = self.check_full.get(depth, []) if mode == "monomial" else self.check_low.get(depth, [])
                if mode == "monomial":
                    ok = all(linalg.is_zero(self._rel_value(V, r)) for r in checks)
                else:
                    ok = all(self._low_ok(V, r) for r in checks)
                if not ok:
                    continue
                tk = dict(taken)
                if slot is not None:
                    tk[self.blocks[k]] = taken.get(self.blocks[k], set()) | {slot}
                found = dfs(depth + 1, assigned + [k], tk)
                if found is not None:
                    return found
            V[k] = self.B.zero(*self.blocks[k])
            return None

        return dfs(0, [], {})

    def _lift(self, k, V):
        """Solve for the degree-k parts of the arrow images from the degree-(k+1) equations."""
        F, B = self.F, self.B
        L = B.loewy_length
        if k >= L:
            ok = all(linalg.is_zero(self._rel_value(V, r)) for r in range(len(self.rels)))
            return V if ok else None
        self._tick()
        unknowns = [(a, int(x)) for a in range(len(self.arrows)) for x in np.flatnonzero(self.deg[self.blocks[a]] == k)]
        eq_idx = []
        for s, t, _ in self.rels:
            eq_idx.append(np.flatnonzero(self.deg[(self.perm[s], self.perm[t])] == k + 1))

        def residual(W, rels=None):
            parts = []
            for r in range(len(self.rels)):
                parts.append(self._rel_value(W, r)[eq_idx[r]])
            return np.concatenate(parts) if parts else F.zeros(0)

        base = residual(V)
        if not unknowns:
            return self._lift(k + 1, V) if linalg.is_zero(base) else None
        cols = []
        for a, x in unknowns:
            W = dict(V)
            W[a] = V[a].copy()
            W[a][x] = F.add(W[a][x], F.one)
            cols.append(F.norm(residual(W) - base))
        M = np.stack(cols, axis=1)
        rhs = F.norm(-base)
        x0 = linalg.solve(M, rhs, F)
        if x0 is None:
            return None
        N = linalg.nullspace(M, F)
        trials = [x0]
        for _ in range(self.budget.retries if N.shape[1] else 0):
            t = F.random(self.rng, N.shape[1])
            trials.append(F.norm(x0 + F.matmul(N, t)))
        for x in trials:
            W = dict(V)
            for (a, idx), c in zip(unknowns, x):
                if c != 0:
                    W[a] = W[a].copy()
                    W[a][idx] = F.add(W[a][idx], c)
            res = self._lift(k + 1, W)
            if res is not None:
                return res
        return None


def iso_search(A, B, budget: IsoBudget = IsoBudget(), permutations=None):
    """Search for an isomorphism A -> B; returns a verdict.

    Phases, each over all admissible vertex maps: monomial substitutions
    (arrows to scalar multiples of arrows), monomial linear part with
    higher-degree corrections, and general linear part with corrections.
    """
    A, B = _as_algebra(A), _as_algebra(B)
    if A.field != B.field:
        return Distinct({"invariant": "field", "left": repr(A.field), "right": repr(B.field)})
    ia, ib = invariants(A), invariants(B)
    diff = ia.first_difference(ib)
    if diff is not None:
        left, right = ia.to_json()[diff], ib.to_json()[diff]
        return Distinct({"invariant": diff, "left": left, "right": right})
    perms = list(permutations) if permutations is not None else list(_vertex_maps(A, B))
    if not perms:
        return Distinct({"invariant": "quiver", "left": "no vertex bijection matches the radical layers",
                         "right": None})
    log, counter = [], [0]
    try:
        for mode in ("monomial", "corrected", "general"):
            for perm in perms:
                found = _Search(A, B, perm, budget, counter, log).run(mode)
                if found is not None:
                    cert = _certificate(A, B, perm, found)
                    cert["phase"] = mode
                    verify_isomorphism(A, B, cert)
                    return Isomorphic(cert)
                log.append(f"{mode}: no substitution for vertex map {sorted(perm.items())}")
    except _OutOfBudget:
        log.append(f"budget of {budget.max_nodes} nodes exhausted")
        return Inconclusive(log)
    log.append("search finished without a certificate")
    return Inconclusive(log)


def socle_equivalence_search(A, B, i, budget: IsoBudget = IsoBudget()):
    """Compare A/soc(P_i) with B/soc(P_i) by iso_search."""
    qa, qb = socle_quotient_at(A, i), socle_quotient_at(B, i)
    v = iso_search(qa, qb, budget)
    if isinstance(v, Isomorphic):
        return SocleEquivalentAt(i, {"method": "quotient_isomorphism", "vertex": i, "isomorphism": v.certificate})
    return v


def verify_certificate(verdict, A, B, endo=None) -> bool:
    """Re-verify a returned verdict; Distinct and Inconclusive carry nothing to check."""
    if isinstance(verdict, Isomorphic):
        return verify_isomorphism(A, B, verdict.certificate)
    if isinstance(verdict, SocleEquivalentAt):
        cert = verdict.certificate
        if cert["method"] == "quotient_isomorphism":
            return verify_isomorphism(socle_quotient_at(A, verdict.vertex), socle_quotient_at(B, verdict.vertex),
                                      cert["isomorphism"])
        if cert["method"] == "phi":
            if endo is None:
                raise CertificateError("the comparison-map certificate needs the endomorphism algebra")
            return verify_phi(_as_algebra(A), endo, cert)
        raise CertificateError(f"unknown method {cert['method']}")
    return True


# ---------------------------------------------------------------------------
# the comparison map for an add-Q-resolution with periodic closure


def _augmentation(alg, T, j, i, d_plus):
    if j == i:
        return d_plus
    return ProjMap.identity(alg, (j,))


def _lift_chain_map(alg, Tb, Ta, x, aug_a, aug_b):
    """A chain map Tb -> Ta over x: P_b -> P_a through the degree-0 augmentations."""
    F = alg.field
    rhs = x @ aug_b
    A0 = postcompose_matrix(aug_a, Tb.term(0))
    sol = linalg.solve(A0, rhs.flat(), F)
    if sol is None:
        return None
    comps = {0: ProjMap.from_flat(alg, Ta.term(0), Tb.term(0), sol)}
    n = -1
    while Tb.term(n):
        prev = comps[n + 1] @ Tb.d(n)
        if not Ta.term(n):
            if not prev.is_zero():
                return None
            break
        sol = linalg.solve(postcompose_matrix(Ta.d(n), Tb.term(n)), prev.flat(), F)
        if sol is None:
            return None
        comps[n] = ProjMap.from_flat(alg, Ta.term(n), Tb.term(n), sol)
        n -= 1
    return ChainMap(Tb, Ta, comps)


def construct_phi(alg, res, endo=None) -> SocleEquivalentAt:
    """Map Λ to the endomorphism algebra of the mutated tilting complex, block by block.

    Stalk-to-stalk blocks are the identity; maps out of P_i are composed
    with the closure map d_+; maps into P_i are lifted through d_+; the
    endomorphisms of P_i are extended down the resolution, which is unique
    up to the socle.
    """
    i = res.vertex
    if res.d_plus is None:
        raise HypothesisNotMet(f"the resolution at vertex {i} has no periodic closure")
    if not res.ker_f1_is_socle:
        raise HypothesisNotMet(f"ker f^1 is not soc(P_{i})")
    summands = res.state().summands()
    E = endo if endo is not None else endo_algebra(alg, summands)
    F = alg.field
    blocks = {}
    for a in alg.vertices:
        for b in alg.vertices:
            Ta, Tb = summands[a - 1], summands[b - 1]
            aug_a = _augmentation(alg, Ta, a, i, res.d_plus)
            aug_b = _augmentation(alg, Tb, b, i, res.d_plus)
            cols = []
            for k in range(alg.dims[(a, b)]):
                x = ProjMap.from_flat(alg, (a,), (b,), alg.basis_vector(a, b, k))
                phi = _lift_chain_map(alg, Tb, Ta, x, aug_a, aug_b)
                if phi is None or not phi.is_chain_map():
                    raise PhiVerificationFailed(f"basis element {k} of block ({a}, {b}) does not lift", ((a, b, k), None))
                cols.append(E.spaces[(a, b)].coords(phi))
            blocks[(a, b)] = np.stack(cols, axis=1) if cols else F.zeros((E.dims[(a, b)], 0))
    rad = radical_and_quiver(E)
    u = rad.algebra.socle_generator(i).vec
    soc = F.matmul(u, rad.change[(i, i)])
    cert = {
        "method": "phi",
        "vertex": i,
        "blocks": {f"{a},{b}": [[int(v) if getattr(F, 'is_prime', False) else F.to_json(v) for v in row] for row in M]
                   for (a, b), M in sorted(blocks.items())},
        "endo_socle": [F.to_json(v) for v in soc],
    }
    verify_phi(alg, E, cert)
    return SocleEquivalentAt(i, cert)


def verify_phi(alg, E, cert) -> bool:
    """Check the comparison map: bijective blocks, units, and products up to the socle line at i."""
    F = alg.field
    i = int(cert["vertex"])
    blocks = {}
    for key, rows in cert["blocks"].items():
        a, b = (int(x) for x in key.split(","))
        blocks[(a, b)] = F.array(rows).reshape(E.dims[(a, b)], alg.dims[(a, b)])
    soc = F.array(cert["endo_socle"])
    if linalg.is_zero(soc):
        raise PhiVerificationFailed("zero socle vector")
    srow = soc.reshape(1, -1)
    R, piv = linalg.rref(srow, F)

    def mod_soc(vecs):
        return linalg.reduce_rows(vecs, R, piv, F)

    # the socle line is an ideal
    for c in alg.vertices:
        if E.dims[(i, c)] and c != i:
            for y in range(E.dims[(i, c)]):
                if not linalg.is_zero(E.mul(i, i, c, soc, F.eye(E.dims[(i, c)])[y])):
                    raise PhiVerificationFailed("socle vector is not annihilated on the right", ((i, c, y), None))
        if E.dims[(c, i)] and c != i:
            for y in range(E.dims[(c, i)]):
                if not linalg.is_zero(E.mul(c, i, i, F.eye(E.dims[(c, i)])[y], soc)):
                    raise PhiVerificationFailed("socle vector is not annihilated on the left", ((c, i, y), None))
    for (a, b), M in blocks.items():
        if (a, b) == (i, i):
            # bijective between the quotients by the two socle lines
            omega = alg.socle_generator(i).vec
            if not linalg.is_zero(mod_soc(F.matmul(M, omega))):
                raise PhiVerificationFailed("soc(P_i) is not sent into the socle line", ((i, i), None))
            if linalg.rank(mod_soc(M.T), F) != M.shape[0] - 1:
                raise PhiVerificationFailed(f"block ({a}, {b}) is not bijective modulo the socle", ((a, b), None))
        elif not linalg.is_invertible(M, F):
            raise PhiVerificationFailed(f"block ({a}, {b}) is not bijective", ((a, b), None))
    for a in alg.vertices:
        diff = F.norm(blocks[(a, a)][:, 0] - E.identity[a])
        if a == i:
            diff = mod_soc(diff)
        if not linalg.is_zero(diff):
            raise PhiVerificationFailed(f"unit of vertex {a} is not preserved", ((a, a, 0), None))
    for a in alg.vertices:
        for b in alg.vertices:
            for c in alg.vertices:
                da, db = alg.dims[(a, b)], alg.dims[(b, c)]
                if not da or not db:
                    continue
                # Phi(x) Phi(y) for all basis pairs
                T = F.tensordot(blocks[(a, b)], E.mult[(a, b, c)], axes=(0, 0))  # (x, q, out)
                lhs = F.tensordot(T, blocks[(b, c)], axes=(1, 0))  # (x, out, y)
                lhs = lhs.transpose(0, 2, 1)
                rhs = F.tensordot(alg.mult[(a, b, c)], blocks[(a, c)], axes=(2, 1))
                D = F.norm(lhs - rhs).reshape(da * db, -1)
                if a == i and c == i:
                    D = mod_soc(D)
                bad = np.flatnonzero(np.any(np.asarray(D != 0, dtype=bool), axis=1))
                if bad.size:
                    x, y = divmod(int(bad[0]), db)
                    raise PhiVerificationFailed(
                        f"products are not preserved for basis pair ({a},{b})[{x}] * ({b},{c})[{y}]",
                        ((a, b, x), (b, c, y)))
    return True
