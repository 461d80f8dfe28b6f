"""Maps between finite direct sums of indecomposable projectives.

A ``ProjMap`` from ``P(src) = P_{s_1} + ... + P_{s_q}`` to ``P(tgt)`` is a
matrix whose (a, b) entry lies in ``e_{t_a} A e_{s_b}`` and acts on ``P_{s_b}``
by left multiplication.  Composition is matrix multiplication:
``(F @ G)[a, c] = sum_b F[a, b] * G[b, c]``.

Elements of ``P(S)`` at vertex v are column vectors in the concatenation of
the blocks ``e_{s_b} A e_v``.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .algebra import AlgebraElement, VertexMismatch


def hom_offsets(alg, tgt, src):
    """Flat layout of Hom(P(src), P(tgt)): row-major over (a, b) blocks."""
    offs, pos = {}, 0
    for a, t in enumerate(tgt):
        for b, s in enumerate(src):
            offs[(a, b)] = pos
            pos += alg.dims[(t, s)]
    return offs, pos


def space_offsets(alg, summands, v):
    offs, pos = [], 0
    for s in summands:
        offs.append(pos)
        pos += alg.dims[(s, v)]
    return offs, pos


class ProjMap:
    __slots__ = ("alg", "tgt", "src", "ent")

    def __init__(self, alg, tgt, src, ent=None):
        self.alg = alg
        self.tgt = tuple(tgt)
        self.src = tuple(src)
        if ent is None:
            ent = [[alg.zero(t, s) for s in self.src] for t in self.tgt]
        self.ent = ent

    # construction
    @classmethod
    def zero(cls, alg, tgt, src):
        return cls(alg, tgt, src)

    @classmethod
    def identity(cls, alg, summands):
        m = cls(alg, summands, summands)
        for a, s in enumerate(summands):
            m.ent[a][a] = alg.unit(s)
        return m

    @classmethod
    def from_elements(cls, alg, rows):
        """Build from a nonempty rectangular list of AlgebraElements."""
        tgt = [r[0].i for r in rows]
        src = [x.j for x in rows[0]]
        m = cls(alg, tgt, src)
        for a, r in enumerate(rows):
            for b, x in enumerate(r):
                if (x.i, x.j) != (tgt[a], src[b]):
                    raise VertexMismatch(f"entry ({a}, {b}) lies in the wrong block")
                m.ent[a][b] = x.vec.copy()
        return m

    @classmethod
    def from_flat(cls, alg, tgt, src, vec):
        offs, _ = hom_offsets(alg, tgt, src)
        m = cls(alg, tgt, src)
        for a, t in enumerate(tgt):
            for b, s in enumerate(src):
                o = offs[(a, b)]
                m.ent[a][b] = np.array(vec[o:o + alg.dims[(t, s)]], dtype=alg.field.dtype)
        return m

    def flat(self):
        parts = [self.ent[a][b] for a in range(len(self.tgt)) for b in range(len(self.src))]
        if not parts:
            return self.alg.field.zeros(0)
        return np.concatenate(parts)

    # algebra
    @property
    def shape(self):
        return (len(self.tgt), len(self.src))

    def entry(self, a, b) -> AlgebraElement:
        return AlgebraElement(self.alg, self.tgt[a], self.src[b], self.ent[a][b])

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        if self.src != other.tgt:
            raise VertexMismatch(f"cannot compose maps: {self.src} != {other.tgt}")
        A, F = self.alg, self.alg.field
        out = ProjMap(A, self.tgt, other.src)
        for a, t in enumerate(self.tgt):
            for c, s in enumerate(other.src):
                acc = A.zero(t, s)
                for b, m in enumerate(self.src):
                    x, y = self.ent[a][b], other.ent[b][c]
                    if x.size and y.size:
                        acc = acc + A.mul(t, m, s, x, y)
                out.ent[a][c] = F.norm(acc)
        return out

    def _combine(self, other, sign):
        if (self.tgt, self.src) != (other.tgt, other.src):
            raise VertexMismatch("maps have different shapes")
        F = self.alg.field
        ent = [[F.norm(x + sign * y) for x, y in zip(r1, r2)] for r1, r2 in zip(self.ent, other.ent)]
        return ProjMap(self.alg, self.tgt, self.src, ent)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        F = self.alg.field
        c = F.elem(c)
        return ProjMap(self.alg, self.tgt, self.src, [[F.norm(x * c) for x in r] for r in self.ent])

    def is_zero(self):
        return all(linalg.is_zero(x) for r in self.ent for x in r)

    def __eq__(self, other):
        return (isinstance(other, ProjMap) and self.tgt == other.tgt and self.src == other.src
                and (self - other).is_zero())

    def rows(self, idx):
        return ProjMap(self.alg, [self.tgt[a] for a in idx], self.src, [self.ent[a] for a in idx])

    def cols(self, idx):
        return ProjMap(self.alg, self.tgt, [self.src[b] for b in idx], [[r[b] for b in idx] for r in self.ent])

    @staticmethod
    def vstack(maps):
        alg, src = maps[0].alg, maps[0].src
        tgt, ent = [], []
        for m in maps:
            if m.src != src:
                raise VertexMismatch("vstack needs equal sources")
            tgt.extend(m.tgt)
            ent.extend(m.ent)
        return ProjMap(alg, tgt, src, ent)

    @staticmethod
    def hstack(maps):
        alg, tgt = maps[0].alg, maps[0].tgt
        src = []
        ent = [[] for _ in tgt]
        for m in maps:
            if m.tgt != tgt:
                raise VertexMismatch("hstack needs equal targets")
            src.extend(m.src)
            for a in range(len(tgt)):
                ent[a].extend(m.ent[a])
        return ProjMap(alg, tgt, src, ent)

    @staticmethod
    def block(alg, grid, tgts, srcs):
        """Block matrix from a grid of ProjMaps (None means zero)."""
        rows = []
        for r, t in enumerate(tgts):
            row = [grid[r][c] if grid[r][c] is not None else ProjMap.zero(alg, t, s) for c, s in enumerate(srcs)]
            rows.append(ProjMap.hstack(row) if row else ProjMap.zero(alg, t, ()))
        if not rows:
            return ProjMap.zero(alg, (), sum((tuple(s) for s in srcs), ()))
        return ProjMap.vstack(rows)

    # linear maps on underlying spaces
    def at_vertex(self, v):
        """Matrix of the map on the vertex-v spaces (column vectors)."""
        A, F = self.alg, self.alg.field
        ro, rn = space_offsets(A, self.tgt, v)
        co, cn = space_offsets(A, self.src, v)
        M = F.zeros((rn, cn))
        for a, t in enumerate(self.tgt):
            for b, s in enumerate(self.src):
                if A.dims[(t, s)] and A.dims[(s, v)] and A.dims[(t, v)]:
                    M[ro[a]:ro[a] + A.dims[(t, v)], co[b]:co[b] + A.dims[(s, v)]] = A.left_matrix(t, s, v, self.ent[a][b])
        return M

    def rank(self):
        return sum(linalg.rank(self.at_vertex(v), self.alg.field) for v in self.alg.vertices)

    def kernel_dim(self):
        return sum(space_dim(self.alg, self.src, v) for v in self.alg.vertices) - self.rank()

    # presentation
    def to_json(self):
        F = self.alg.field
        return {
            "source": list(self.src),
            "target": list(self.tgt),
            "entries": [[[F.to_json(c) for c in x] for x in r] for r in self.ent],
        }

    def __repr__(self):
        rows = ["[" + ", ".join(self.alg.label(self.tgt[a], self.src[b], x) for b, x in enumerate(r)) + "]"
                for a, r in enumerate(self.ent)]
        return f"ProjMap({list(self.src)} -> {list(self.tgt)}: " + "; ".join(rows) + ")"


def space_dim(alg, summands, v):
    return sum(alg.dims[(s, v)] for s in summands)


def total_dim(alg, summands):
    return sum(space_dim(alg, summands, v) for v in alg.vertices)


def precompose_matrix(F: ProjMap, Y):
    """Matrix of ``g -> g @ F`` from Hom(P(F.tgt), P(Y)) to Hom(P(F.src), P(Y))."""
    A = F.alg
    io, inn = hom_offsets(A, Y, F.tgt)
    oo, on = hom_offsets(A, Y, F.src)
    M = A.field.zeros((on, inn))
    for y, yv in enumerate(Y):
        for c, s in enumerate(F.src):
            o = oo[(y, c)]
            do = A.dims[(yv, s)]
            if not do:
                continue
            for a, t in enumerate(F.tgt):
                di = A.dims[(yv, t)]
                if di and A.dims[(t, s)]:
                    M[o:o + do, io[(y, a)]:io[(y, a)] + di] = A.right_matrix(yv, t, s, F.ent[a][c])
    return M


def postcompose_matrix(F: ProjMap, X):
    """Matrix of ``g -> F @ g`` from Hom(P(X), P(F.src)) to Hom(P(X), P(F.tgt))."""
    A = F.alg
    io, inn = hom_offsets(A, F.src, X)
    oo, on = hom_offsets(A, F.tgt, X)
    M = A.field.zeros((on, inn))
    for a, t in enumerate(F.tgt):
        for x, xv in enumerate(X):
            o = oo[(a, x)]
            do = A.dims[(t, xv)]
            if not do:
                continue
            for b, s in enumerate(F.src):
                di = A.dims[(s, xv)]
                if di and A.dims[(t, s)]:
                    M[o:o + do, io[(b, x)]:io[(b, x)] + di] = A.left_matrix(t, s, xv, F.ent[a][b])
    return M


def radical_flags(alg, tgt, src):
    """Flat indices of the idempotent coordinates in Hom(P(src), P(tgt)).

    A map is radical exactly when all these coordinates vanish.
    """
    offs, _ = hom_offsets(alg, tgt, src)
    return [offs[(a, b)] + k for a, t in enumerate(tgt) for b, s in enumerate(src) if t == s
            for k, d in enumerate(alg.degrees[(t, s)]) if d == 0]


def is_radical(F: ProjMap):
    vec = F.flat()
    return all(vec[k] == 0 for k in radical_flags(F.alg, F.tgt, F.src))


def generators_of_radical(alg, u, v):
    """Degree-one basis elements of e_u A e_v; they generate the radical."""
    return [alg.basis_vector(u, v, k) for k, d in enumerate(alg.degrees[(u, v)]) if d == 1]


def right_action(alg, summands, u, v, x):
    """Matrix of ``m -> m*x`` from P(summands)_u to P(summands)_v, x in e_u A e_v."""
    blocks = [alg.right_matrix(s, u, v, x) for s in summands]
    return linalg.block_diag(blocks, alg.field) if blocks else alg.field.zeros((0, 0))


def submodule_top(alg, summands, basis):
    """Minimal generators of a submodule of P(summands).

    ``basis[v]`` spans the submodule at vertex v (columns).  Returns a list of
    (vertex, vector) pairs in canonical order.
    """
    F = alg.field
    gens = []
    for v in alg.vertices:
        K = basis[v]
        n = space_dim(alg, summands, v)
        if K.shape[1] == 0:
            continue
        rad = []
        for u in alg.vertices:
            if basis[u].shape[1] == 0:
                continue
            for x in generators_of_radical(alg, u, v):
                rad.append(F.matmul(right_action(alg, summands, u, v, x), basis[u]).T)
        sub = np.concatenate(rad, axis=0) if rad else F.zeros((0, n))
        top = linalg.complement_rows(sub, K.T, F, width=n)
        gens.extend((v, top[r]) for r in range(top.shape[0]))
    return gens


def generators_to_map(alg, summands, gens):
    """ProjMap ``P(gen vertices) -> P(summands)`` sending e_v to each generator."""
    src = [v for v, _ in gens]
    m = ProjMap(alg, summands, src)
    for b, (v, vec) in enumerate(gens):
        offs, _ = space_offsets(alg, summands, v)
        for a, s in enumerate(summands):
            m.ent[a][b] = np.array(vec[offs[a]:offs[a] + alg.dims[(s, v)]], dtype=alg.field.dtype)
    return m


def kernel_basis(F: ProjMap):
    return {v: linalg.nullspace(F.at_vertex(v), F.alg.field) for v in F.alg.vertices}


def image_basis(F: ProjMap):
    out = {}
    for v in F.alg.vertices:
        M = F.at_vertex(v)
        if M.size == 0:
            out[v] = F.alg.field.zeros((M.shape[0], 0))
        else:
            R, _ = linalg.rref(M.T, F.alg.field)
            out[v] = R.T
    return out


def kernel_cover(F: ProjMap) -> ProjMap:
    """Projective cover of ker F, as a map into P(F.src) with image ker F."""
    gens = submodule_top(F.alg, F.src, kernel_basis(F))
    return generators_to_map(F.alg, F.src, gens)


def radical_cover(alg, i) -> ProjMap:
    """Projective cover of rad P_i, a map into P_i built from the degree-one elements."""
    gens = []
    for v in alg.vertices:
        for x in generators_of_radical(alg, i, v):
            gens.append((v, x))
    return generators_to_map(alg, (i,), gens)


def minimal_resolution_of_simple(alg, i, length):
    """Differentials d_1, ..., d_length of the minimal projective resolution of S_i.

    ``d_1: P_1 -> P_0 = P_i`` and ``d_{k+1}`` covers ker d_k.
    """
    ds = [radical_cover(alg, i)]
    while len(ds) < length:
        if not ds[-1].src:
            break
        ds.append(kernel_cover(ds[-1]))
    return ds


def image_equals_kernel(G: ProjMap, F: ProjMap) -> bool:
    """Exactness ``im G = ker F`` for composable maps ``G`` then ``F``."""
    if not (F @ G).is_zero():
        return False
    fld = F.alg.field
    for v in F.alg.vertices:
        n = space_dim(F.alg, F.src, v)
        if n - linalg.rank(F.at_vertex(v), fld) != linalg.rank(G.at_vertex(v), fld):
            return False
    return True
