"""Right modules over a presented algebra, as quiver representations.

A representation assigns a space ``M_v`` (column vectors) to each vertex and to
each arrow ``a: u -> v`` the matrix of ``m -> m*a`` from ``M_u`` to ``M_v``.  A
path ``a_1 a_2 ... a_r`` therefore acts by ``M_{a_r} ... M_{a_1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import AlgebraError, NotSelfInjective, path_target
from .projmap import (ProjMap, generators_to_map, hom_offsets, minimal_resolution_of_simple,
                      image_equals_kernel, space_offsets, is_radical)


class ZeroModule(AlgebraError):
    pass


class RelationViolated(AlgebraError):
    pass


class Representation:
    def __init__(self, alg, dims, act, check=True):
        self.alg = alg
        self.field = alg.field
        self.dims = {v: int(dims.get(v, 0)) for v in alg.vertices}
        F = self.field
        self.act = {}
        for a in alg.quiver.arrows:
            M = act.get(a.id)
            shape = (self.dims[a.target], self.dims[a.source])
            self.act[a.id] = F.zeros(shape) if M is None else F.norm(np.asarray(M, dtype=F.dtype).reshape(shape))
        self._path_cache = {}
        if check:
            self.check_relations()

    @property
    def dim(self):
        return sum(self.dims.values())

    def dim_vector(self):
        return tuple(self.dims[v] for v in self.alg.vertices)

    def is_zero(self):
        return self.dim == 0

    def path_matrix(self, path):
        if path in self._path_cache:
            return self._path_cache[path]
        src, word = path
        F = self.field
        M = F.eye(self.dims[src])
        for k in word:
            M = F.matmul(self.act[self.alg.quiver.arrows[k].id], M)
        self._path_cache[path] = M
        return M

    def element_matrix(self, i, j, vec):
        """Matrix of ``m -> m*x`` from M_i to M_j for x in e_i A e_j."""
        F = self.field
        out = F.zeros((self.dims[j], self.dims[i]))
        for k, c in enumerate(vec):
            if c != 0:
                out = F.norm(out + self.path_matrix(self.alg.paths[(i, j)][k]) * c)
        return out

    def check_relations(self):
        F = self.field
        q = self.alg.quiver
        for poly in self.alg.presentation.relation_polys():
            p0 = next(iter(poly))
            s, t = p0[0], path_target(q, p0)
            acc = F.zeros((self.dims[t], self.dims[s]))
            for p, c in poly.items():
                acc = F.norm(acc + self.path_matrix(p) * c)
            if not linalg.is_zero(acc):
                raise RelationViolated("a relation does not act as zero")

    def to_json(self):
        F = self.field
        return {
            "dims": [self.dims[v] for v in self.alg.vertices],
            "arrows": {k: [[F.to_json(c) for c in row] for row in M] for k, M in self.act.items()},
        }

    def __repr__(self):
        return f"Representation(dims={self.dim_vector()})"


@dataclass
class ModuleHom:
    source: Representation
    target: Representation
    mats: dict  # vertex -> matrix (target dim x source dim)

    def flat(self):
        F = self.source.field
        parts = [self.mats[v].reshape(-1) for v in self.source.alg.vertices]
        return np.concatenate(parts) if parts else F.zeros(0)

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        F = self.source.field
        return ModuleHom(other.source, self.target,
                         {v: F.matmul(self.mats[v], other.mats[v]) for v in self.source.alg.vertices})

    def is_zero(self):
        return all(linalg.is_zero(M) for M in self.mats.values())

    def is_invertible(self):
        F = self.source.field
        return all(linalg.is_invertible(M, F) for M in self.mats.values())

    def rank(self):
        return sum(linalg.rank(M, self.source.field) for M in self.mats.values())

    def is_intertwiner(self):
        F = self.source.field
        for a in self.source.alg.quiver.arrows:
            lhs = F.matmul(self.mats[a.target], self.source.act[a.id])
            rhs = F.matmul(self.target.act[a.id], self.mats[a.source])
            if not linalg.is_zero(F.norm(lhs - rhs)):
                return False
        return True


def hom_from_flat(M, N, vec):
    mats, pos = {}, 0
    for v in M.alg.vertices:
        n = N.dims[v] * M.dims[v]
        mats[v] = np.array(vec[pos:pos + n], dtype=M.field.dtype).reshape(N.dims[v], M.dims[v])
        pos += n
    return ModuleHom(M, N, mats)


def identity_hom(M):
    return ModuleHom(M, M, {v: M.field.eye(M.dims[v]) for v in M.alg.vertices})


# ---------------------------------------------------------------------------
# standard modules


def projective_sum(alg, summands):
    """The representation of P(summands) in the coordinates used by ProjMap."""
    F = alg.field
    dims = {v: sum(alg.dims[(s, v)] for s in summands) for v in alg.vertices}
    act = {}
    for a in alg.quiver.arrows:
        x = alg.arrow(a.id).vec
        blocks = [alg.right_matrix(s, a.source, a.target, x) for s in summands]
        act[a.id] = linalg.block_diag(blocks, F) if blocks else F.zeros((0, 0))
    return Representation(alg, dims, act, check=False)


def projective(alg, i):
    return projective_sum(alg, (i,))


def simple(alg, i):
    return Representation(alg, {i: 1}, {}, check=False)


def projmap_hom(F: ProjMap, M=None, N=None) -> ModuleHom:
    M = M or projective_sum(F.alg, F.src)
    N = N or projective_sum(F.alg, F.tgt)
    return ModuleHom(M, N, {v: F.at_vertex(v) for v in F.alg.vertices})


# ---------------------------------------------------------------------------
# homomorphisms


def hom_equations(M, N):
    F = M.field
    offs, pos = {}, 0
    for v in M.alg.vertices:
        offs[v] = pos
        pos += N.dims[v] * M.dims[v]
    rows = []
    for a in M.alg.quiver.arrows:
        s, t = a.source, a.target
        r = N.dims[t] * M.dims[s]
        if r == 0:
            continue
        eq = F.zeros((r, pos))
        # X_t M_a - N_a X_s with row-major vectorisation
        if M.dims[t]:
            eq[:, offs[t]:offs[t] + N.dims[t] * M.dims[t]] = np.kron(F.eye(N.dims[t]), M.act[a.id].T)
        if N.dims[s]:
            blk = np.kron(N.act[a.id], F.eye(M.dims[s]))
            eq[:, offs[s]:offs[s] + N.dims[s] * M.dims[s]] = F.norm(
                eq[:, offs[s]:offs[s] + N.dims[s] * M.dims[s]] - blk)
        rows.append(F.norm(eq))
    return (np.concatenate(rows, axis=0) if rows else F.zeros((0, pos))), pos


def hom_space(M, N):
    """A basis of Hom(M, N) as a list of ModuleHoms."""
    E, n = hom_equations(M, N)
    K = linalg.nullspace(E, M.field) if n else M.field.zeros((0, 0))
    return [hom_from_flat(M, N, K[:, c]) for c in range(K.shape[1])]


def submodule(M, basis):
    """Sub-representation spanned at each vertex by the columns of ``basis[v]``."""
    F = M.field
    act = {}
    for a in M.alg.quiver.arrows:
        Bs, Bt = basis[a.source], basis[a.target]
        if Bs.shape[1] == 0 or Bt.shape[1] == 0:
            act[a.id] = F.zeros((Bt.shape[1], Bs.shape[1]))
            if Bs.shape[1] and not linalg.is_zero(F.matmul(M.act[a.id], Bs)):
                raise AlgebraError("basis does not span a submodule")
            continue
        Y = linalg.solve(Bt, F.matmul(M.act[a.id], Bs), F)
        if Y is None:
            raise AlgebraError("basis does not span a submodule")
        act[a.id] = Y
    S = Representation(M.alg, {v: basis[v].shape[1] for v in M.alg.vertices}, act, check=False)
    return S, ModuleHom(S, M, dict(basis))


def quotient(M, basis):
    """Quotient of M by the submodule spanned by ``basis``; returns (Q, projection)."""
    F = M.field
    comp, proj = {}, {}
    for v in M.alg.vertices:
        n = M.dims[v]
        B = basis[v]
        C = linalg.complement_rows(B.T, F.eye(n), F, width=n).T  # columns complementing B
        comp[v] = C
        full = np.concatenate([B, C], axis=1)
        inv = linalg.inverse(full, F)
        proj[v] = inv[B.shape[1]:, :]
    act = {a.id: F.matmul(proj[a.target], F.matmul(M.act[a.id], comp[a.source])) for a in M.alg.quiver.arrows}
    Q = Representation(M.alg, {v: comp[v].shape[1] for v in M.alg.vertices}, act, check=False)
    return Q, ModuleHom(M, Q, proj)


def kernel(h: ModuleHom):
    F = h.source.field
    return submodule(h.source, {v: linalg.nullspace(h.mats[v], F) if h.mats[v].size or h.source.dims[v] == 0
                                else F.eye(h.source.dims[v]) for v in h.source.alg.vertices})


def image_basis(h: ModuleHom):
    F = h.source.field
    out = {}
    for v in h.source.alg.vertices:
        M = h.mats[v]
        if M.shape[1] == 0 or M.shape[0] == 0:
            out[v] = F.zeros((M.shape[0], 0))
        else:
            out[v] = linalg.rref(M.T, F)[0].T
    return out


def cokernel(h: ModuleHom):
    return quotient(h.target, image_basis(h))


def radical_basis(M):
    F = M.field
    out = {}
    for v in M.alg.vertices:
        imgs = [M.act[a.id] for a in M.alg.quiver.arrows if a.target == v and M.dims[a.source]]
        if imgs and M.dims[v]:
            out[v] = linalg.rref(np.concatenate(imgs, axis=1).T, F)[0].T
        else:
            out[v] = F.zeros((M.dims[v], 0))
    return out


def socle_basis(M):
    F = M.field
    out = {}
    for v in M.alg.vertices:
        maps = [M.act[a.id] for a in M.alg.quiver.arrows if a.source == v and M.dims[a.target]]
        if maps and M.dims[v]:
            out[v] = linalg.nullspace(np.concatenate(maps, axis=0), F)
        else:
            out[v] = F.eye(M.dims[v])
    return out


def top_generators(M):
    """Canonical representatives of a basis of M / rad M, as (vertex, vector) pairs."""
    F = M.field
    rad = radical_basis(M)
    gens = []
    for v in M.alg.vertices:
        n = M.dims[v]
        if n == 0:
            continue
        top = linalg.complement_rows(rad[v].T, F.eye(n), F, width=n)
        gens.extend((v, top[r]) for r in range(top.shape[0]))
    return gens


def projective_cover(M):
    """The projective cover ``p: P(top M) -> M``."""
    alg, F = M.alg, M.field
    gens = top_generators(M)
    P = projective_sum(alg, [v for v, _ in gens])
    mats = {}
    for w in alg.vertices:
        cols = []
        for v, m in gens:
            for p in alg.paths[(v, w)]:
                cols.append(F.matmul(M.path_matrix(p), m))
        mats[w] = np.stack(cols, axis=1) if cols else F.zeros((M.dims[w], 0))
    return ModuleHom(P, M, mats)


@dataclass
class SyzygyStep:
    module: Representation  # the syzygy
    cover: ModuleHom  # P(top M) -> M
    inclusion: ModuleHom  # syzygy -> P(top M)


def syzygy(M):
    if M.is_zero():
        raise ZeroModule("the syzygy of the zero module is not defined here")
    p = projective_cover(M)
    K, inc = kernel(p)
    return SyzygyStep(K, p, inc)


def injective_envelope(M):
    """An injective envelope ``M -> P(summands)`` driven by the socle of M.

    For a self-injective algebra the socle of ``P_j`` is simple at nu(j), so
    ``S_t`` embeds into ``P_j`` with ``nu(j) = t``.
    """
    alg, F = M.alg, M.field
    nu = alg.nakayama_permutation()
    inv_nu = {t: j for j, t in nu.items()}
    soc = socle_basis(M)
    chosen = []
    for t in alg.vertices:
        S = soc[t]
        if S.shape[1] == 0:
            continue
        j = inv_nu[t]
        _, omega = alg.socle(j)[0]
        piv = int(np.flatnonzero(np.asarray(omega != 0, dtype=bool))[0])
        scale = F.inv(omega[piv])
        homs = hom_space(M, projective(alg, j))
        R, piv_list, rows = None, [], []
        for h in homs:
            functional = F.norm(F.matmul(h.mats[t], S)[piv] * scale)
            trial = np.array(rows + [functional], dtype=F.dtype)
            if linalg.rank(trial, F) > len(rows):
                rows.append(functional)
                chosen.append((j, h))
            if len(rows) == S.shape[1]:
                break
        if len(rows) < S.shape[1]:
            raise NotSelfInjective(f"socle at vertex {t} does not embed into P_{j}")
    summands = [j for j, _ in chosen]
    target = projective_sum(alg, summands)
    mats = {}
    for v in alg.vertices:
        blocks = [h.mats[v] for _, h in chosen]
        mats[v] = np.concatenate(blocks, axis=0) if blocks else F.zeros((0, M.dims[v]))
    return ModuleHom(M, target, mats), summands


def cosyzygy(M):
    env, _ = injective_envelope(M)
    Q, _ = cokernel(env)
    return Q


# ---------------------------------------------------------------------------
# isomorphism and periods


@dataclass
class ModuleIso:
    hom: ModuleHom
    how: str


@dataclass
class ModuleDistinct:
    witness: str


@dataclass
class ModuleInconclusive:
    log: list = dc_field(default_factory=list)


def module_iso(M, N, random_tries=64, exhaustive_limit=10**6, seed=0):
    """Find an isomorphism M -> N by the escalation ladder basis, random, exhaustive."""
    if M.dim_vector() != N.dim_vector():
        return ModuleDistinct(f"dimension vectors {M.dim_vector()} != {N.dim_vector()}")
    if M.dim == 0:
        return ModuleIso(ModuleHom(M, N, {v: M.field.zeros((0, 0)) for v in M.alg.vertices}), "zero")
    F = M.field
    H = hom_space(M, N)
    if not H:
        return ModuleDistinct("Hom(M, N) = 0")
    log = []
    for h in H:
        if h.is_invertible():
            return ModuleIso(h, "basis")
    log.append(f"no basis element of Hom (dim {len(H)}) is invertible")
    vecs = np.stack([h.flat() for h in H], axis=1)
    rng = np.random.default_rng(seed)
    for _ in range(random_tries):
        h = hom_from_flat(M, N, F.matmul(vecs, F.random(rng, len(H))))
        if h.is_invertible():
            return ModuleIso(h, "random")
    log.append(f"{random_tries} seeded random combinations failed")
    if F.size is not None and F.size ** len(H) <= exhaustive_limit:
        for coeffs in itertools.product(F.elements(), repeat=len(H)):
            h = hom_from_flat(M, N, F.matmul(vecs, np.array(coeffs, dtype=F.dtype)))
            if h.is_invertible():
                return ModuleIso(h, "exhaustive")
        return ModuleDistinct("exhaustive search over Hom(M, N) found no isomorphism")
    log.append("search space too large for exhaustive enumeration")
    return ModuleInconclusive(log)


def period_of_simple(alg, i, max_d=12):
    """Least d <= max_d with Omega^d(S_i) isomorphic to S_i, or None."""
    alg.nakayama_permutation()
    S = simple(alg, i)
    M = S
    for d in range(1, max_d + 1):
        M = syzygy(M).module
        if M.is_zero():
            return None
        if isinstance(module_iso(M, S), ModuleIso):
            return d
    return None


@dataclass
class ResolutionSegment:
    """Minimal projective resolution ``... -> P_2 -> P_1 -> P_0 -> S_i``.

    ``differentials[k-1]`` is ``d_k: P_k -> P_{k-1}``.
    """

    vertex: int
    differentials: list

    def terms(self):
        return [self.differentials[0].tgt] + [d.src for d in self.differentials]

    def verify(self):
        ds = self.differentials
        alg = ds[0].alg
        # cok d_1 is simple at the resolved vertex
        if ds[0].tgt != (self.vertex,) or ds[0].rank() != sum(alg.dims[(self.vertex, v)] for v in alg.vertices) - 1:
            return False
        for a, b in zip(ds[1:], ds):
            if not image_equals_kernel(a, b):
                return False
        # minimality: every differential is radical
        return all(is_radical(d) for d in ds)

    def to_json(self):
        return {"vertex": self.vertex, "terms": [list(t) for t in self.terms()],
                "differentials": [d.to_json() for d in self.differentials]}


def projective_resolution(alg, i, length):
    return ResolutionSegment(i, minimal_resolution_of_simple(alg, i, length))


# ---------------------------------------------------------------------------
# approximations


def _left_mult_hom(alg, j, l, r, P_l, P_j):
    """ModuleHom P_l -> P_j given by left multiplication with r in e_j A e_l."""
    m = ProjMap(alg, (j,), (l,))
    m.ent[0][0] = r
    return projmap_hom(m, P_l, P_j)


@dataclass
class Approximation:
    hom: ModuleHom
    summands: tuple  # vertices of the projective summands of the codomain


def minimal_left_approximation(X, i):
    """Minimal left add(Q)-approximation ``X -> Q'`` with Q the sum of P_j, j != i."""
    alg, F = X.alg, X.field
    others = [j for j in alg.vertices if j != i]
    P = {j: projective(alg, j) for j in others}
    H = {j: hom_space(X, P[j]) for j in others}
    chosen = []
    for j in others:
        if not H[j]:
            continue
        width = H[j][0].flat().shape[0]
        rad = []
        for l in others:
            for k in alg.radical_indices(j, l):
                lam = _left_mult_hom(alg, j, l, alg.basis_vector(j, l, k), P[l], P[j])
                rad.extend((lam @ h).flat() for h in H[l])
        sub = np.array(rad, dtype=F.dtype).reshape(-1, width)
        top = linalg.complement_rows(sub, np.stack([h.flat() for h in H[j]]), F, width=width)
        chosen.extend((j, hom_from_flat(X, P[j], top[r])) for r in range(top.shape[0]))
    summands = tuple(j for j, _ in chosen)
    target = projective_sum(alg, summands)
    mats = {}
    for v in alg.vertices:
        blocks = [h.mats[v] for _, h in chosen]
        mats[v] = np.concatenate(blocks, axis=0) if blocks else F.zeros((0, X.dims[v]))
    return Approximation(ModuleHom(X, target, mats), summands)


def _endo_homs(alg, summands):
    """Basis of End(P(summands)) as (ProjMap, ModuleHom) pairs."""
    _, n = hom_offsets(alg, summands, summands)
    target = projective_sum(alg, summands)
    out = []
    for k in range(n):
        e = alg.field.zeros(n)
        e[k] = 1
        m = ProjMap.from_flat(alg, summands, summands, e)
        out.append((m, projmap_hom(m, target, target)))
    return out


def verify_left_approximation(X, i, approx: Approximation):
    """Check the factorisation property and left minimality."""
    alg, F = X.alg, X.field
    f = approx.hom
    for j in alg.vertices:
        if j == i:
            continue
        Pj = projective(alg, j)
        H = hom_space(X, Pj)
        if not H:
            continue
        _, n = hom_offsets(alg, (j,), approx.summands)
        cols = []
        for k in range(n):
            e = F.zeros(n)
            e[k] = 1
            g = projmap_hom(ProjMap.from_flat(alg, (j,), approx.summands, e), f.target, Pj)
            cols.append((g @ f).flat())
        if not cols:
            return False
        A = np.stack(cols, axis=1)
        for h in H:
            if linalg.solve(A, h.flat(), F) is None:
                return False
    # minimality: every g with g f = 0 is radical
    endos = _endo_homs(alg, approx.summands)
    if not endos:
        return True
    A = np.stack([(g @ f).flat() for _, g in endos], axis=1)
    N = linalg.nullspace(A, F)
    for c in range(N.shape[1]):
        m = ProjMap.from_flat(alg, approx.summands, approx.summands, N[:, c])
        if not is_radical(m):
            return False
    return True


def minimal_right_approximation(X, i):
    """Minimal right add(Q)-approximation ``Q' -> X``."""
    alg, F = X.alg, X.field
    others = [j for j in alg.vertices if j != i]
    gens = []
    for j in others:
        n = X.dims[j]
        if n == 0:
            continue
        sub = []
        for l in others:
            for k in alg.radical_indices(l, j):
                M = X.element_matrix(l, j, alg.basis_vector(l, j, k))
                if X.dims[l]:
                    sub.append(M.T)
        sub = np.concatenate(sub, axis=0) if sub else F.zeros((0, n))
        top = linalg.complement_rows(sub, F.eye(n), F, width=n)
        gens.extend((j, top[r]) for r in range(top.shape[0]))
    summands = tuple(j for j, _ in gens)
    P = projective_sum(alg, summands)
    mats = {}
    for w in alg.vertices:
        cols = []
        for v, m in gens:
            for p in alg.paths[(v, w)]:
                cols.append(F.matmul(X.path_matrix(p), m))
        mats[w] = np.stack(cols, axis=1) if cols else F.zeros((X.dims[w], 0))
    return Approximation(ModuleHom(P, X, mats), summands)


def right_approximation_of_projective(alg, i) -> ProjMap:
    """The minimal right add(Q)-approximation of P_i as a ProjMap ``P(Q') -> P_i``."""
    others = [j for j in alg.vertices if j != i]
    F = alg.field
    gens = []
    for j in others:
        n = alg.dims[(i, j)]
        if n == 0:
            continue
        sub = []
        for l in others:
            for k in alg.radical_indices(l, j):
                sub.append(alg.right_matrix(i, l, j, alg.basis_vector(l, j, k)).T)
        sub = np.concatenate(sub, axis=0) if sub else F.zeros((0, n))
        top = linalg.complement_rows(sub, F.eye(n), F, width=n)
        gens.extend((j, top[r]) for r in range(top.shape[0]))
    return generators_to_map(alg, (i,), gens)
