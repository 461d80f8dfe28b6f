"""Quivers, presentations and the finite-dimensional algebra KQ/I.

Paths compose left to right: ``alpha*beta`` means alpha, then beta.  An element
of ``e_i A e_j`` (paths from i to j) is identified with the map ``P_j -> P_i``
given by left multiplication.

The normal-form basis is computed by a noncommutative standard-basis
completion in the truncated path algebra ``KQ / R^L`` with the local
(degree-ascending) term order: the leading term of an element is its
*shortest* path, ties broken lexicographically on arrow positions.  Because the
order is degree-first, the basis paths of length >= k span ``J^k`` for every k.
``L`` is raised until some full degree ``L-1`` has no normal paths left, which
shows ``R^(L-1)`` lies in ``I``.
"""

from __future__ import annotations

import heapq
import itertools
import json
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import linalg
from .field import Field, parse_field


class AlgebraError(Exception):
    pass


class NotAdmissible(AlgebraError):
    pass


class Disconnected(AlgebraError):
    pass


class ZeroRelationDegenerate(AlgebraError):
    pass


class VertexMismatch(AlgebraError):
    pass


class NotSelfInjective(AlgebraError):
    pass


class NotWeaklySymmetric(AlgebraError):
    pass


class Inconclusive(AlgebraError):
    pass


class PresentationError(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# quivers and paths


@dataclass(frozen=True)
class Arrow:
    id: str
    source: int
    target: int


class Quiver:
    def __init__(self, vertex_count: int, arrows):
        if vertex_count < 1:
            raise PresentationError("a quiver needs at least one vertex")
        self.n = int(vertex_count)
        self.arrows = tuple(Arrow(str(a.id), int(a.source), int(a.target)) for a in arrows)
        self.index = {}
        for k, a in enumerate(self.arrows):
            if a.id in self.index:
                raise PresentationError(f"duplicate arrow id {a.id!r}")
            for v in (a.source, a.target):
                if not 1 <= v <= self.n:
                    raise PresentationError(f"arrow {a.id!r} uses vertex {v} outside 1..{self.n}")
            self.index[a.id] = k
        self.out = {v: [k for k, a in enumerate(self.arrows) if a.source == v] for v in self.vertices}
        self.into = {v: [k for k, a in enumerate(self.arrows) if a.target == v] for v in self.vertices}

    @property
    def vertices(self):
        return range(1, self.n + 1)

    def is_connected(self) -> bool:
        seen = {1}
        todo = [1]
        while todo:
            v = todo.pop()
            for a in self.arrows:
                for x, y in ((a.source, a.target), (a.target, a.source)):
                    if x == v and y not in seen:
                        seen.add(y)
                        todo.append(y)
        return len(seen) == self.n

    def arrow_counts(self):
        c = np.zeros((self.n, self.n), dtype=int)
        for a in self.arrows:
            c[a.source - 1, a.target - 1] += 1
        return c

    def loops(self):
        return [a for a in self.arrows if a.source == a.target]

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.n == other.n and self.arrows == other.arrows

    def __repr__(self):
        return f"Quiver({self.n}, {[(a.id, a.source, a.target) for a in self.arrows]})"


# A path is (source vertex, tuple of arrow indices).


def path_target(quiver: Quiver, path) -> int:
    src, word = path
    return quiver.arrows[word[-1]].target if word else src


def path_key(path):
    return (len(path[1]), path[1], path[0])


def path_label(quiver: Quiver, path) -> str:
    src, word = path
    if not word:
        return f"e{src}"
    return "*".join(quiver.arrows[k].id for k in word)


def make_path(quiver: Quiver, arrow_ids, source=None):
    word = tuple(quiver.index[a] for a in arrow_ids)
    if not word:
        if source is None:
            raise PresentationError("trivial path needs a source vertex")
        return (int(source), ())
    for x, y in zip(word, word[1:]):
        if quiver.arrows[x].target != quiver.arrows[y].source:
            raise PresentationError(f"arrows {arrow_ids} do not compose")
    return (quiver.arrows[word[0]].source, word)


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Relation:
    """A linear combination of paths of length >= 2 sharing source and target.

    ``raw`` keeps the coefficients exactly as they were written, so that a
    presentation read from JSON is written back unchanged.
    """

    terms: list  # list of (raw coefficient, tuple of arrow ids)

    def paths(self):
        return [p for _, p in self.terms]


@dataclass
class AlgebraPresentation:
    field: Field
    quiver: Quiver
    relations: list
    meta: dict = dc_field(default_factory=dict)
    field_raw: object = None

    def __post_init__(self):
        if self.field_raw is None:
            self.field_raw = self.field.spec()
        for r in self.relations:
            self._check_relation(r)

    def _check_relation(self, rel: Relation):
        if not rel.terms:
            raise PresentationError("empty relation")
        ends = set()
        for c, ids in rel.terms:
            if len(ids) < 2:
                raise PresentationError(f"relation term {ids} has length < 2")
            p = make_path(self.quiver, ids)
            ends.add((p[0], path_target(self.quiver, p)))
            if self.field.elem(c) == self.field.zero:
                raise PresentationError(f"zero coefficient on {ids}")
        if len(ends) != 1:
            raise PresentationError(f"relation terms do not share source and target: {rel.terms}")

    def relation_polys(self):
        """Relations as dicts path -> field element, like terms collected."""
        F = self.field
        out = []
        for rel in self.relations:
            poly = {}
            for c, ids in rel.terms:
                p = make_path(self.quiver, ids)
                poly[p] = F.add(poly.get(p, F.zero), F.elem(c))
            poly = {p: c for p, c in poly.items() if c != F.zero}
            if not poly:
                raise ZeroRelationDegenerate(f"relation {rel.terms} is identically zero")
            out.append(poly)
        return out

    # JSON -------------------------------------------------------------
    def to_json(self):
        obj = {
            "field": self.field_raw,
            "vertices": self.quiver.n,
            "arrows": [{"id": a.id, "source": a.source, "target": a.target} for a in self.quiver.arrows],
            "relations": [[{"coeff": c, "path": list(ids)} for c, ids in r.terms] for r in self.relations],
        }
        if self.meta:
            obj["meta"] = self.meta
        return obj

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict):
            raise PresentationError("presentation must be a JSON object")
        try:
            F = parse_field(obj["field"])
            quiver = Quiver(obj["vertices"], [Arrow(a["id"], a["source"], a["target"]) for a in obj["arrows"]])
            rels = [Relation([(t["coeff"], tuple(t["path"])) for t in r]) for r in obj.get("relations", [])]
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from exc
        for r in rels:
            for c, _ in r.terms:
                if not isinstance(c, (int, str)) or isinstance(c, bool):
                    raise PresentationError(f"coefficient {c!r} must be an integer or a 'p/q' string")
        return cls(F, quiver, rels, meta=obj.get("meta", {}), field_raw=obj["field"])

    @classmethod
    def loads(cls, text: str):
        return cls.from_json(json.loads(text))


def coeff_raw(F, c):
    """JSON representation of a field element used when writing new presentations."""
    return F.to_json(c)


# ---------------------------------------------------------------------------
# standard-basis completion in the truncated path algebra


class _Reducer:
    def __init__(self, quiver: Quiver, F, trunc: int):
        self.q = quiver
        self.F = F
        self.L = trunc
        self.G = {}  # leading word -> monic poly
        self.lens = set()

    def _lead(self, poly):
        return min(poly, key=path_key)

    def _divisor(self, word):
        n = len(word)
        for i in range(n):
            for ln in sorted(self.lens):
                if i + ln > n:
                    break
                sub = word[i:i + ln]
                if sub in self.G:
                    return i, ln
        return None

    def _has_suffix(self, word):
        n = len(word)
        for ln in self.lens:
            if ln <= n and word[n - ln:] in self.G:
                return True
        return False

    def reduce(self, poly):
        F = self.F
        f = {p: c for p, c in poly.items() if c != F.zero and len(p[1]) < self.L}
        heap = [(path_key(p), p) for p in f]
        heapq.heapify(heap)
        out = {}
        while heap:
            _, p = heapq.heappop(heap)
            c = f.pop(p, None)
            if c is None or c == F.zero:
                continue
            div = self._divisor(p[1])
            if div is None:
                out[p] = c
                continue
            i, ln = div
            word = p[1]
            g = self.G[word[i:i + ln]]
            lead = word[i:i + ln]
            u, v = word[:i], word[i + ln:]
            for (qs, qw), d in g.items():
                if qw == lead:
                    continue
                nw = u + qw + v
                if len(nw) >= self.L:
                    continue
                np_ = (p[0], nw)
                old = f.get(np_)
                new = F.sub(old if old is not None else F.zero, F.mul(c, d))
                if old is None:
                    heapq.heappush(heap, (path_key(np_), np_))
                f[np_] = new
        return out

    def _monic(self, poly):
        lead = self._lead(poly)
        inv = self.F.inv(poly[lead])
        return {p: self.F.mul(c, inv) for p, c in poly.items()}, lead

    def _rmul(self, poly, word):
        return {(p[0], p[1] + word): c for p, c in poly.items() if len(p[1]) + len(word) < self.L}

    def _lmul(self, word, src, poly):
        return {(src, word + p[1]): c for p, c in poly.items() if len(p[1]) + len(word) < self.L}

    def complete(self, polys):
        F = self.F
        queue = deque(polys)
        while queue:
            h = self.reduce(queue.popleft())
            if not h:
                continue
            h, lead = self._monic(h)
            s = lead[1]
            # old elements whose leading word contains s become reducible
            for w in [w for w in self.G if w != s and _contains(w, s)]:
                queue.append(self.G.pop(w))
            self.lens = {len(w) for w in self.G} | {len(s)}
            self.G[s] = h
            for w, g in list(self.G.items()):
                for a, b, ga, gb in ((s, w, h, g), (w, s, g, h)):
                    for k in range(1, min(len(a), len(b))):
                        if a[-k:] == b[:k]:
                            left = self._rmul(ga, b[k:])
                            src = self.q.arrows[a[0]].source
                            right = self._lmul(a[:-k], src, gb)
                            spoly = dict(left)
                            for p, c in right.items():
                                spoly[p] = F.sub(spoly.get(p, F.zero), c)
                            queue.append(spoly)
                    if a is b:
                        break
            self.lens = {len(w) for w in self.G}

    def normal_words(self):
        """All normal paths of length < L, grouped by length."""
        layers = [[(v, ()) for v in self.q.vertices]]
        while True:
            nxt = []
            for p in layers[-1]:
                t = path_target(self.q, p)
                for k in self.q.out[t]:
                    w = p[1] + (k,)
                    if len(w) >= self.L or self._has_suffix(w):
                        continue
                    nxt.append((p[0], w))
            if not nxt:
                return layers
            layers.append(nxt)


def _contains(word, sub):
    n, m = len(word), len(sub)
    return any(word[i:i + m] == sub for i in range(n - m + 1))


# ---------------------------------------------------------------------------
# structure-constant algebras


class BlockAlgebra:
    """A basic algebra given by bases of the blocks ``e_i A e_j`` and structure constants.

    ``degrees[(i, j)]`` is a radical filtration of the basis: the elements of
    degree >= k span ``e_i J^k e_j``.  Block bases list the idempotent first.
    """

    def __init__(self, field, n, dims, degrees, labels, mult):
        self.field = field
        self.n = n
        self.dims = dims
        self.degrees = degrees
        self.labels = labels
        self.mult = mult
        self._cache = {}

    # basic data
    @property
    def vertices(self):
        return range(1, self.n + 1)

    @property
    def dim(self):
        return sum(self.dims.values())

    def cartan(self):
        return np.array([[self.dims[(i, j)] for j in self.vertices] for i in self.vertices], dtype=int)

    @property
    def loewy_length(self):
        return max(int(d.max()) for d in self.degrees.values() if len(d)) + 1

    def radical_layer_dims(self):
        """dims[(i, j)][k] = dim e_i J^k e_j / e_i J^(k+1) e_j."""
        ll = self.loewy_length
        return {
            key: [int(np.sum(deg == k)) for k in range(ll)] for key, deg in self.degrees.items()
        }

    def zero(self, i, j):
        return self.field.zeros(self.dims[(i, j)])

    def unit(self, i):
        v = self.zero(i, i)
        v[0] = self.field.one
        return v

    def basis_vector(self, i, j, k):
        v = self.zero(i, j)
        v[k] = self.field.one
        return v

    def element(self, i, j, vec):
        return AlgebraElement(self, i, j, self.field.norm(np.asarray(vec, dtype=self.field.dtype)))

    def mul(self, i, j, k, x, y):
        M = self.mult[(i, j, k)]
        if M.size == 0:
            return self.zero(i, k)
        F = self.field
        return F.tensordot(F.tensordot(x, M, axes=(0, 0)), y, axes=(0, 0))

    def left_matrix(self, i, j, k, lam):
        """Matrix of ``y -> lam*y`` from e_j A e_k to e_i A e_k, lam in e_i A e_j."""
        M = self.mult[(i, j, k)]
        if M.size == 0:
            return self.field.zeros((self.dims[(i, k)], self.dims[(j, k)]))
        return self.field.tensordot(lam, M, axes=(0, 0)).T

    def right_matrix(self, i, j, k, mu):
        """Matrix of ``x -> x*mu`` from e_i A e_j to e_i A e_k, mu in e_j A e_k."""
        M = self.mult[(i, j, k)]
        if M.size == 0:
            return self.field.zeros((self.dims[(i, k)], self.dims[(i, j)]))
        return self.field.tensordot(M, mu, axes=(1, 0)).T

    def radical_indices(self, i, j):
        return [k for k, d in enumerate(self.degrees[(i, j)]) if d >= 1]

    def radical_basis(self, i, j):
        return [self.basis_vector(i, j, k) for k in self.radical_indices(i, j)]

    def label(self, i, j, vec) -> str:
        F = self.field
        parts = []
        for k, c in enumerate(vec):
            if c != 0:
                cs = "" if c == F.one else f"{F.to_json(c)}*"
                parts.append(f"{cs}{self.labels[(i, j)][k]}")
        return " + ".join(parts) if parts else "0"

    # structure
    def socle(self, i):
        """Basis of soc(e_i A) as a list of (j, vector)."""
        key = ("socle", i)
        if key in self._cache:
            return self._cache[key]
        F = self.field
        out = []
        for j in self.vertices:
            rows = []
            for k in self.vertices:
                for r in self.radical_basis(j, k):
                    rows.append(self.right_matrix(i, j, k, r))
            if rows:
                N = linalg.nullspace(np.concatenate(rows, axis=0), F)
            else:
                N = F.eye(self.dims[(i, j)])
            out.extend((j, N[:, c]) for c in range(N.shape[1]))
        self._cache[key] = out
        return out

    def nakayama_permutation(self):
        """nu(i) = j with soc(P_i) isomorphic to S_j."""
        nu = {}
        for i in self.vertices:
            soc = self.socle(i)
            if len(soc) != 1:
                raise NotSelfInjective(f"soc(P_{i}) has dimension {len(soc)}")
            nu[i] = soc[0][0]
        if sorted(nu.values()) != list(self.vertices):
            raise NotSelfInjective(f"socle map {nu} is not a permutation")
        return nu

    def is_weakly_symmetric(self):
        try:
            nu = self.nakayama_permutation()
        except NotSelfInjective:
            return False
        return all(nu[i] == i for i in self.vertices)

    def socle_generator(self, i):
        if not self.is_weakly_symmetric():
            raise NotWeaklySymmetric("socle generators need a weakly symmetric algebra")
        j, vec = self.socle(i)[0]
        assert j == i
        # normalise: first nonzero coordinate 1
        nz = np.flatnonzero(np.asarray(vec != 0, dtype=bool))
        vec = self.field.norm(vec * self.field.inv(vec[nz[0]]))
        return self.element(i, i, vec)

    def center_dim(self):
        F = self.field
        offs, tot = {}, 0
        for i in self.vertices:
            offs[i] = tot
            tot += self.dims[(i, i)]
        rows = []
        for i in self.vertices:
            for j in self.vertices:
                for k in range(self.dims[(i, j)]):
                    x = self.basis_vector(i, j, k)
                    # z_i * x - x * z_j = 0, as a map of z
                    eq = F.zeros((self.dims[(i, j)], tot))
                    eq[:, offs[i]:offs[i] + self.dims[(i, i)]] = self.right_matrix(i, i, j, x)
                    eq[:, offs[j]:offs[j] + self.dims[(j, j)]] = F.norm(
                        eq[:, offs[j]:offs[j] + self.dims[(j, j)]] - self.left_matrix(i, j, j, x))
                    rows.append(eq)
        return tot - linalg.rank(np.concatenate(rows, axis=0), F)

    def check_associative(self, max_triples=20000, seed=0):
        F = self.field
        triples = [(i, j, k, l) for i in self.vertices for j in self.vertices for k in self.vertices for l in self.vertices]
        total = sum(self.dims[(i, j)] * self.dims[(j, k)] * self.dims[(k, l)] for i, j, k, l in triples)
        rng = np.random.default_rng(seed)
        for i, j, k, l in triples:
            if 0 in (self.dims[(i, j)], self.dims[(j, k)], self.dims[(k, l)]):
                continue
            if total <= max_triples:
                idx = itertools.product(range(self.dims[(i, j)]), range(self.dims[(j, k)]), range(self.dims[(k, l)]))
            else:
                cnt = max(1, max_triples // len(triples))
                idx = zip(rng.integers(0, self.dims[(i, j)], cnt), rng.integers(0, self.dims[(j, k)], cnt),
                          rng.integers(0, self.dims[(k, l)], cnt))
            for a, b, c in idx:
                x, y, z = self.basis_vector(i, j, a), self.basis_vector(j, k, b), self.basis_vector(k, l, c)
                lhs = self.mul(i, k, l, self.mul(i, j, k, x, y), z)
                rhs = self.mul(i, j, l, x, self.mul(j, k, l, y, z))
                if not linalg.is_zero(F.norm(lhs - rhs)):
                    return False
        return True

    # symmetric forms ---------------------------------------------------
    def symmetric_form_space(self):
        """Basis of linear forms lambda (on the diagonal blocks) with lambda(ab) = lambda(ba)."""
        F = self.field
        offs, tot = {}, 0
        for i in self.vertices:
            offs[i] = tot
            tot += self.dims[(i, i)]
        rows = []
        for i in self.vertices:
            for j in self.vertices:
                if j < i:
                    continue
                Mij, Mji = self.mult[(i, j, i)], self.mult[(j, i, j)]
                for a in range(self.dims[(i, j)]):
                    for b in range(self.dims[(j, i)]):
                        row = F.zeros(tot)
                        row[offs[i]:offs[i] + self.dims[(i, i)]] = Mij[a, b]
                        row[offs[j]:offs[j] + self.dims[(j, j)]] = F.norm(
                            row[offs[j]:offs[j] + self.dims[(j, j)]] - Mji[b, a])
                        rows.append(row)
        N = linalg.nullspace(np.array(rows, dtype=F.dtype).reshape(-1, tot), F)
        return N, offs

    def form_is_nondegenerate(self, lam, offs) -> bool:
        F = self.field
        for i in self.vertices:
            for j in self.vertices:
                if j < i:
                    continue
                if self.dims[(i, j)] != self.dims[(j, i)]:
                    return False
                if self.dims[(i, j)] == 0:
                    continue
                gram = F.tensordot(self.mult[(i, j, i)], lam[offs[i]:offs[i] + self.dims[(i, i)]], axes=(2, 0))
                if not linalg.is_invertible(gram, F):
                    return False
        return True

    def check_symmetric(self, random_tries=64, exhaustive_limit=10**6, seed=0):
        """A nondegenerate symmetric associative form, or None if none exists.

        Raises :class:`Inconclusive` when the bounded search cannot decide.
        """
        key = "symmetric"
        if key in self._cache:
            return self._cache[key]
        F = self.field
        N, offs = self.symmetric_form_space()
        k = N.shape[1]
        result = None
        exhausted = False
        if k:
            cands = [N[:, c] for c in range(k)]
            for lam in cands:
                if self.form_is_nondegenerate(lam, offs):
                    result = lam
                    break
            if result is None:
                rng = np.random.default_rng(seed)
                for _ in range(random_tries):
                    lam = F.matmul(N, F.random(rng, k))
                    if self.form_is_nondegenerate(lam, offs):
                        result = lam
                        break
            if result is None and F.size is not None and F.size ** k <= exhaustive_limit:
                exhausted = True
                for coeffs in itertools.product(F.elements(), repeat=k):
                    lam = F.matmul(N, np.array(coeffs, dtype=F.dtype))
                    if self.form_is_nondegenerate(lam, offs):
                        result = lam
                        break
        else:
            exhausted = True
        if result is None and not exhausted:
            raise Inconclusive("no symmetric form found by the bounded search")
        form = None if result is None else SymmetricForm(self, {i: result[offs[i]:offs[i] + self.dims[(i, i)]] for i in self.vertices})
        self._cache[key] = form
        return form


@dataclass
class SymmetricForm:
    algebra: BlockAlgebra
    values: dict  # vertex -> linear functional on e_i A e_i

    def __call__(self, x: "AlgebraElement"):
        if x.i != x.j:
            return self.algebra.field.zero
        return self.algebra.field.tensordot(self.values[x.i], x.vec, axes=(0, 0))


class AlgebraElement:
    """Coefficient vector over the basis of one block e_i A e_j."""

    __slots__ = ("alg", "i", "j", "vec")

    def __init__(self, alg, i, j, vec):
        self.alg, self.i, self.j, self.vec = alg, i, j, vec

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        F = self.alg.field
        return AlgebraElement(self.alg, self.i, self.j, F.norm(self.vec * F.elem(other)))

    __rmul__ = lambda self, c: self.__mul__(c)  # noqa: E731

    def __add__(self, other):
        self._same_block(other)
        return AlgebraElement(self.alg, self.i, self.j, self.alg.field.norm(self.vec + other.vec))

    def __sub__(self, other):
        self._same_block(other)
        return AlgebraElement(self.alg, self.i, self.j, self.alg.field.norm(self.vec - other.vec))

    def __neg__(self):
        return AlgebraElement(self.alg, self.i, self.j, self.alg.field.norm(-self.vec))

    def _same_block(self, other):
        if (self.i, self.j) != (other.i, other.j):
            raise VertexMismatch(f"cannot add elements of blocks {(self.i, self.j)} and {(other.i, other.j)}")

    def is_zero(self):
        return linalg.is_zero(self.vec)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and (self.i, self.j) == (other.i, other.j)
                and linalg.is_zero(self.alg.field.norm(self.vec - other.vec)))

    def __repr__(self):
        return self.alg.label(self.i, self.j, self.vec)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.j != y.i:
        raise VertexMismatch(f"x ends at {x.j} but y starts at {y.i}")
    return AlgebraElement(x.alg, x.i, y.j, x.alg.mul(x.i, x.j, y.j, x.vec, y.vec))


class Algebra(BlockAlgebra):
    """KQ/I with its normal-form path basis."""

    def __init__(self, presentation, reducer, words):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self._reducer = reducer
        q = self.quiver
        F = presentation.field
        blocks = {(i, j): [] for i in q.vertices for j in q.vertices}
        for layer in words:
            for p in layer:
                blocks[(p[0], path_target(q, p))].append(p)
        for key in blocks:
            blocks[key].sort(key=path_key)
        self.paths = blocks
        self.path_index = {key: {p: k for k, p in enumerate(ps)} for key, ps in blocks.items()}
        dims = {key: len(ps) for key, ps in blocks.items()}
        degrees = {key: np.array([len(p[1]) for p in ps], dtype=int) for key, ps in blocks.items()}
        labels = {key: [path_label(q, p) for p in ps] for key, ps in blocks.items()}
        self._nf_cache = {}
        self.field = F
        mult = {}
        for i in q.vertices:
            for j in q.vertices:
                for k in q.vertices:
                    M = F.zeros((dims[(i, j)], dims[(j, k)], dims[(i, k)]))
                    for a, x in enumerate(blocks[(i, j)]):
                        for b, y in enumerate(blocks[(j, k)]):
                            M[a, b] = self._path_vec(i, k, (i, x[1] + y[1]))
                    mult[(i, j, k)] = M
        super().__init__(F, q.n, dims, degrees, labels, mult)

    def _path_vec(self, i, k, path):
        if path in self._nf_cache:
            return self._nf_cache[path]
        F = self.field
        v = F.zeros(len(self.paths[(i, k)]))
        nf = self._reducer.reduce({path: F.one})
        idx = self.path_index[(i, k)]
        for p, c in nf.items():
            v[idx[p]] = c
        self._nf_cache[path] = v
        return v

    def path_element(self, arrow_ids, source=None) -> AlgebraElement:
        p = make_path(self.quiver, arrow_ids, source)
        i, j = p[0], path_target(self.quiver, p)
        return AlgebraElement(self, i, j, self._path_vec(i, j, p).copy())

    def arrow(self, arrow_id) -> AlgebraElement:
        return self.path_element([arrow_id])

    def e(self, i) -> AlgebraElement:
        return AlgebraElement(self, i, i, self.unit(i))

    def poly_element(self, terms) -> AlgebraElement:
        """Element from a list of (coefficient, arrow ids)."""
        F = self.field
        out = None
        for c, ids in terms:
            x = self.path_element(ids) * F.elem(c)
            out = x if out is None else out + x
        return out

    def element_terms(self, x: AlgebraElement):
        """(coefficient, arrow ids) pairs of an element in the path basis."""
        out = []
        for k, c in enumerate(x.vec):
            if c != 0:
                p = self.paths[(x.i, x.j)][k]
                out.append((c, tuple(self.quiver.arrows[a].id for a in p[1])))
        return out


def build_algebra(pres: AlgebraPresentation, degree_cap: int = 30) -> Algebra:
    """Normal-form basis and multiplication table of KQ/I."""
    if degree_cap < 2:
        raise ValueError("degree_cap must be at least 2")
    if not pres.quiver.is_connected():
        raise Disconnected("the quiver is not connected")
    polys = pres.relation_polys()
    longest = max((len(p[1]) for poly in polys for p in poly), default=1)
    for L in range(min(max(3, longest + 1), degree_cap + 1), degree_cap + 2):
        red = _Reducer(pres.quiver, pres.field, L)
        red.complete(polys)
        words = red.normal_words()
        if len(words) < L:  # no normal path of length L-1
            return Algebra(pres, red, words)
    raise NotAdmissible(f"normal paths survive at degree {degree_cap}; the ideal may not contain a power of the arrow ideal")
