"""Iterated mutation at a vertex through add(Q)-resolutions.

For a vertex i write ``Q`` for the sum of the projectives ``P_j``, ``j != i``.
Step k produces the complex ``P_i -> P^(1) -> ... -> P^(k)`` in degrees
``-k..0`` whose differentials ``f^1, ..., f^k`` are minimal left
add(Q)-approximations of the successive cokernels.  A periodic closure is a
map ``d_+: P^(m) -> P_i`` with ``im f^m = ker d_+`` whose image is the trace
of Q in P_i, i.e. a right add(Q)-approximation of P_i.  Without loops at i the
trace is ``rad P_i``; a loop at i contributes a top-layer element of ``rad P_i``
that no map from Q reaches, so then ``cok d_+`` is strictly bigger than the top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .algebra import AlgebraError
from .complexes import ProjComplex, hom_complex, stalk, is_tilting, direct_sum
from .projmap import (ProjMap, hom_offsets, image_equals_kernel, is_radical, minimal_resolution_of_simple,
                      postcompose_matrix, precompose_matrix, total_dim)


class ApproximationVerificationFailed(AlgebraError):
    pass


class NoClosureFound(AlgebraError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    """Budgets for the bounded searches for invertible or full-rank solutions."""

    random_tries: int = 64
    exhaustive_limit: int = 10**6
    seed: int = 0


# ---------------------------------------------------------------------------
# approximations at the level of projective maps


def _elem_map(alg, j, l, vec):
    m = ProjMap(alg, (j,), (l,))
    m.ent[0][0] = vec
    return m


def kernel_homs(alg, prev_map, dom, j):
    """Basis (rows) of {g: P(dom) -> P_j with g @ prev_map = 0}; all of Hom if prev_map is None."""
    F = alg.field
    _, n = hom_offsets(alg, (j,), dom)
    if n == 0:
        return F.zeros((0, 0))
    if prev_map is None:
        return F.eye(n)
    N = linalg.nullspace(precompose_matrix(prev_map, (j,)), F)
    return N.T


def left_approximation_map(alg, i, dom, prev_map=None) -> ProjMap:
    """Minimal left add(Q)-approximation of cok(prev_map), as a map out of P(dom).

    For each j != i the rows are a canonical basis of ``H_j / R_j`` where
    ``H_j`` are the maps to P_j vanishing on the image of prev_map and
    ``R_j`` are the composites through radical maps ``P_l -> P_j``, l != i.
    """
    F = alg.field
    others = [j for j in alg.vertices if j != i]
    H = {j: kernel_homs(alg, prev_map, dom, j) for j in others}
    rows = []
    for j in others:
        if H[j].shape[0] == 0:
            continue
        width = H[j].shape[1]
        rad = []
        for l in others:
            if H[l].shape[0] == 0:
                continue
            for k in alg.radical_indices(j, l):
                M = postcompose_matrix(_elem_map(alg, j, l, alg.basis_vector(j, l, k)), dom)
                rad.append(F.matmul(H[l], M.T))
        sub = np.concatenate(rad, axis=0) if rad else F.zeros((0, width))
        top = linalg.complement_rows(sub, H[j], F, width=width)
        rows.extend(ProjMap.from_flat(alg, (j,), dom, top[r]) for r in range(top.shape[0]))
    if not rows:
        return ProjMap.zero(alg, (), dom)
    return ProjMap.vstack(rows)


def check_left_approximation(alg, i, f: ProjMap, prev_map=None):
    """Factorisation and minimality of f as an approximation of cok(prev_map).

    Returns a list of failure messages (empty when f passes).
    """
    F = alg.field
    problems = []
    for j in alg.vertices:
        if j == i:
            continue
        H = kernel_homs(alg, prev_map, f.src, j)
        if H.shape[0] == 0:
            continue
        A = precompose_matrix(f, (j,))
        if A.shape[1] == 0:
            problems.append(f"no maps through the approximation into P_{j}")
            continue
        R, piv = linalg.rref(A.T, F)
        for h in H:
            if not linalg.in_row_space(h, R, piv, F):
                problems.append(f"a map into P_{j} does not factor")
                break
    if f.tgt:
        N = linalg.nullspace(precompose_matrix(f, f.tgt), F)
        for c in range(N.shape[1]):
            if not is_radical(ProjMap.from_flat(alg, f.tgt, f.tgt, N[:, c])):
                problems.append("approximation is not left minimal")
                break
    return problems


def check_kb_approximation(alg, i, complex_prev: ProjComplex, f: ProjMap):
    """Direct test in the homotopy category: every map from the complex into a
    stalk P_j (j != i) factors through the degree-0 map f."""
    F = alg.field
    A_cache = {}
    for j in alg.vertices:
        if j == i:
            continue
        space = hom_complex(complex_prev, stalk(alg, j))
        if space.dim == 0:
            continue
        A = A_cache.setdefault(j, precompose_matrix(f, (j,)))
        if A.shape[1] == 0:
            return False
        R, piv = linalg.rref(A.T, F)
        for k in range(space.dim):
            g = space.rep(k).comp(0).flat()
            if not linalg.in_row_space(g, R, piv, F):
                return False
    return True


# ---------------------------------------------------------------------------
# states and resolutions


@dataclass
class MutationState:
    alg: object
    vertex: int
    maps: list = dc_field(default_factory=list)  # f^1 .. f^k

    @property
    def step(self):
        return len(self.maps)

    def term(self, k):
        """P^(k); P^(0) = P_i."""
        return (self.vertex,) if k == 0 else self.maps[k - 1].tgt

    def complex(self) -> ProjComplex:
        k = self.step
        terms = {-k + t: self.term(t) for t in range(k + 1)}
        diffs = {-k + t: self.maps[t] for t in range(k)}
        return ProjComplex(self.alg, terms, diffs)

    def summands(self):
        """The tilting summands ordered by vertex: the mutated one at i, stalks elsewhere."""
        return [self.complex() if j == self.vertex else stalk(self.alg, j) for j in self.alg.vertices]

    def tilting_complex(self) -> ProjComplex:
        T = None
        for S in self.summands():
            T = S if T is None else direct_sum(T, S)
        return T

    def is_exact(self):
        return all(image_equals_kernel(a, b) for a, b in zip(self.maps, self.maps[1:]))


def initial_state(alg, i) -> MutationState:
    return MutationState(alg, i, [])


def mutate_step(state: MutationState, verify=True) -> MutationState:
    alg, i = state.alg, state.vertex
    prev = state.maps[-1] if state.maps else None
    f = left_approximation_map(alg, i, state.term(state.step), prev)
    if verify:
        problems = check_left_approximation(alg, i, f, prev)
        if problems:
            raise ApproximationVerificationFailed("; ".join(problems))
        if not check_kb_approximation(alg, i, state.complex(), f):
            raise ApproximationVerificationFailed("homotopy-category factorisation test failed")
    return MutationState(alg, i, state.maps + [f])


def mutate(alg, i, steps, verify=True) -> MutationState:
    s = initial_state(alg, i)
    for _ in range(steps):
        s = mutate_step(s, verify=verify)
    return s


@dataclass
class AddQResolution:
    alg: object
    vertex: int
    maps: list
    ker_f1_is_socle: bool
    d_plus: ProjMap | None = None
    complete: bool = True  # False when the length bound ran out before a closure was found

    @property
    def cok_is_top(self) -> bool:
        """cok(d_+) is the simple top of P_i."""
        return self.d_plus is not None and self.d_plus.rank() == total_dim(self.alg, (self.vertex,)) - 1

    @property
    def length(self):
        return len(self.maps)

    def terms(self):
        return [(self.vertex,)] + [f.tgt for f in self.maps]

    def state(self, k=None) -> MutationState:
        k = self.length if k is None else k
        return MutationState(self.alg, self.vertex, list(self.maps[:k]))

    def to_json(self):
        return {
            "vertex": self.vertex,
            "terms": [list(t) for t in self.terms()],
            "maps": [f.to_json() for f in self.maps],
            "ker_f1_is_socle": self.ker_f1_is_socle,
            "d_plus": None if self.d_plus is None else self.d_plus.to_json(),
            "cok_is_top": self.cok_is_top,
            "complete": self.complete,
        }


def kernel_is_socle(alg, i, f1: ProjMap) -> bool:
    """ker(f^1) = soc(P_i)."""
    F = alg.field
    soc = alg.socle(i)
    if f1.kernel_dim() != len(soc):
        return False
    for v, vec in soc:
        if not linalg.is_zero(F.matmul(f1.at_vertex(v), vec)):
            return False
    return True


def build_addq_resolution(alg, i, max_len=8, verify=True, search=SearchConfig()) -> AddQResolution:
    """Iterate approximations until a periodic closure exists or max_len is reached."""
    alg.nakayama_permutation()
    state = initial_state(alg, i)
    d_plus = None
    while state.step < max_len:
        state = mutate_step(state, verify=verify)
        d_plus = find_periodic_closure_map(alg, i, state.maps[-1], search)
        if d_plus is not None:
            break
    ker_soc = bool(state.maps) and kernel_is_socle(alg, i, state.maps[0])
    return AddQResolution(alg, i, state.maps, ker_soc, d_plus, complete=d_plus is not None)


def _combinations(N, F, search: SearchConfig):
    """Deterministic candidate ladder over the column span of N."""
    k = N.shape[1]
    for c in range(k):
        yield N[:, c]
    if k > 1:
        yield F.norm(N.sum(axis=1))
    rng = np.random.default_rng(search.seed)
    for _ in range(search.random_tries):
        yield F.matmul(N, F.random(rng, k))
    if F.size is not None and F.size ** k <= search.exhaustive_limit:
        for coeffs in itertools.product(F.elements(), repeat=k):
            yield F.matmul(N, np.array(coeffs, dtype=F.dtype))


def trace_dim(alg, i) -> int:
    """dim of the trace of Q in P_i, the sum of the images of all maps P_j -> P_i, j != i."""
    F = alg.field
    total = 0
    for k in alg.vertices:
        vecs = []
        for j in alg.vertices:
            if j == i or not alg.dims[(i, j)] or not alg.dims[(j, k)]:
                continue
            for a in range(alg.dims[(i, j)]):
                vecs.append(alg.left_matrix(i, j, k, alg.basis_vector(i, j, a)).T)
        if vecs:
            total += linalg.rank(np.concatenate(vecs, axis=0), F)
    return total


def find_periodic_closure_map(alg, i, fm: ProjMap, search=SearchConfig()):
    """A right add(Q)-approximation d_+: P^(m) -> P_i with im(f^m) = ker(d_+), or None."""
    F = alg.field
    dom = fm.tgt
    if i in dom or not dom:
        return None
    tr = trace_dim(alg, i)
    if total_dim(alg, dom) - tr != fm.rank():
        return None
    N = linalg.nullspace(precompose_matrix(fm, (i,)), F)
    if N.shape[1] == 0:
        return None
    for vec in _combinations(N, F, search):
        d = ProjMap.from_flat(alg, (i,), dom, vec)
        if d.rank() == tr and image_equals_kernel(fm, d):
            return d
    return None


def find_periodic_closure(res: AddQResolution, search=SearchConfig()):
    if not res.maps:
        raise NoClosureFound("empty resolution")
    return find_periodic_closure_map(res.alg, res.vertex, res.maps[-1], search)


def from_projective_resolution(alg, i, max_d=12):
    """The add(Q)-resolution read off the minimal projective resolution of S_i.

    Applies when S_i has period d and the middle terms P_1 .. P_(d-2) have no
    summand P_i; the maps are ``f^k = d_(d-k)`` and ``d_+ = d_1``.
    """
    ds = minimal_resolution_of_simple(alg, i, max_d)
    period = None
    for k, d in enumerate(ds, start=1):
        if k >= 2 and d.src == (i,) and ds[k - 2].kernel_dim() == 1:
            period = k
            break
    if period is None or period < 3:
        return None
    middle = [ds[k].src for k in range(period - 2)]  # P_1 .. P_(d-2)
    if any(i in t for t in middle):
        return None
    maps = [ds[period - k - 1] for k in range(1, period - 1)]
    return AddQResolution(alg, i, maps, kernel_is_socle(alg, i, maps[0]), ds[0], complete=True)


def periodic_extension(res: AddQResolution, k: int) -> MutationState:
    """Initial segment of length k of the periodic resolution, using f^(m+1) = f^1 d_+."""
    if res.d_plus is None:
        raise NoClosureFound("periodic extension needs a closure d_+")
    m = res.length
    maps = []
    for t in range(1, k + 1):
        if t <= m:
            maps.append(res.maps[t - 1])
        else:
            r = (t - 1) % m + 1
            maps.append(res.maps[0] @ res.d_plus if r == 1 else res.maps[r - 1])
    return MutationState(res.alg, res.vertex, maps)


# ---------------------------------------------------------------------------
# comparing approximations and resolutions


def is_projective_iso(g: ProjMap) -> bool:
    """Invertibility of an endomorphism-shaped map between sums of projectives."""
    if sorted(g.src) != sorted(g.tgt):
        return False
    F = g.alg.field
    verts = sorted(set(g.src))
    for v in verts:
        rows = [a for a, t in enumerate(g.tgt) if t == v]
        cols = [b for b, s in enumerate(g.src) if s == v]
        top = F.zeros((len(rows), len(cols)))
        for r, a in enumerate(rows):
            for c, b in enumerate(cols):
                top[r, c] = g.ent[a][b][0]
        if not linalg.is_invertible(top, F):
            return False
    return True


def _search_invertible(alg, shapes, particular, N, search):
    """Look for an invertible tuple in ``particular + span(N)``; shapes is [(tgt, src)]."""
    F = alg.field
    offsets, pos = [], 0
    for tgt, src in shapes:
        _, n = hom_offsets(alg, tgt, src)
        offsets.append((pos, n))
        pos += n

    def unpack(vec):
        return [ProjMap.from_flat(alg, tgt, src, vec[o:o + n]) for (tgt, src), (o, n) in zip(shapes, offsets)]

    def ok(vec):
        maps = unpack(vec)
        return maps if all(is_projective_iso(g) for g in maps) else None

    got = ok(particular)
    if got:
        return got
    if N.shape[1] == 0:
        return None
    for delta in _combinations(N, F, search):
        got = ok(F.norm(particular + delta))
        if got:
            return got
    return None


def approximations_isomorphic(f: ProjMap, g: ProjMap, search=SearchConfig()):
    """An invertible u with u @ f = g (left approximations out of the same object), or None."""
    if f.src != g.src or sorted(f.tgt) != sorted(g.tgt):
        return None
    alg, F = f.alg, f.alg.field
    A = precompose_matrix(f, g.tgt)
    part = linalg.solve(A, g.flat(), F)
    if part is None:
        return None
    got = _search_invertible(alg, [(g.tgt, f.tgt)], part, linalg.nullspace(A, F), search)
    return got[0] if got else None


def right_approximations_isomorphic(d: ProjMap, e: ProjMap, search=SearchConfig()):
    """An invertible u with e @ u = d (right approximations into the same object), or None."""
    if d.tgt != e.tgt or sorted(d.src) != sorted(e.src):
        return None
    alg, F = d.alg, d.alg.field
    A = postcompose_matrix(e, d.src)
    part = linalg.solve(A, d.flat(), F)
    if part is None:
        return None
    got = _search_invertible(alg, [(e.src, d.src)], part, linalg.nullspace(A, F), search)
    return got[0] if got else None


def resolution_isomorphism(maps_a, maps_b, dplus_a=None, dplus_b=None, search=SearchConfig()):
    """Invertible g^k: P_a^(k) -> P_b^(k) with g^1 f_a^1 = f_b^1 and g^k f_a^k = f_b^k g^(k-1).

    When both closures are given also ``d_b g^m = d_a``.  Returns the list of
    g's or None.
    """
    if len(maps_a) != len(maps_b) or not maps_a:
        return None
    alg, F = maps_a[0].alg, maps_a[0].alg.field
    if maps_a[0].src != maps_b[0].src:
        return None
    shapes = [(fb.tgt, fa.tgt) for fa, fb in zip(maps_a, maps_b)]
    if any(sorted(t) != sorted(s) for t, s in shapes):
        return None
    offs, pos = [], 0
    for t, s in shapes:
        _, n = hom_offsets(alg, t, s)
        offs.append(pos)
        pos += n
    blocks, rhs = [], []
    # g^1 f_a^1 = f_b^1
    fa, fb = maps_a[0], maps_b[0]
    M = precompose_matrix(fa, fb.tgt)
    row = F.zeros((M.shape[0], pos))
    row[:, offs[0]:offs[0] + M.shape[1]] = M
    blocks.append(row)
    rhs.append(fb.flat())
    for k in range(1, len(maps_a)):
        fa, fb = maps_a[k], maps_b[k]
        M1 = precompose_matrix(fa, fb.tgt)  # g^k -> g^k f_a^k
        M2 = postcompose_matrix(fb, fa.src)  # g^(k-1) -> f_b^k g^(k-1)
        row = F.zeros((M1.shape[0], pos))
        row[:, offs[k]:offs[k] + M1.shape[1]] = M1
        row[:, offs[k - 1]:offs[k - 1] + M2.shape[1]] = F.norm(row[:, offs[k - 1]:offs[k - 1] + M2.shape[1]] - M2)
        blocks.append(row)
        rhs.append(F.zeros(M1.shape[0]))
    if dplus_a is not None and dplus_b is not None:
        M = postcompose_matrix(dplus_b, maps_a[-1].tgt)
        row = F.zeros((M.shape[0], pos))
        row[:, offs[-1]:offs[-1] + M.shape[1]] = M
        blocks.append(row)
        rhs.append(dplus_a.flat())
    A = np.concatenate(blocks, axis=0)
    b = np.concatenate(rhs)
    part = linalg.solve(A, b, F)
    if part is None:
        return None
    return _search_invertible(alg, shapes, part, linalg.nullspace(A, F), search)


def canonical_resolution(res: AddQResolution, verify=False) -> AddQResolution:
    """The canonical resolution with the same f^1 chain, plus transport of d_+.

    The canonical maps are recomputed step by step; a resolution made of
    minimal approximations is isomorphic to them (checked when ``verify``).
    """
    alg, i = res.alg, res.vertex
    state = mutate(alg, i, res.length, verify=False)
    d_plus = None
    if res.d_plus is not None:
        gs = resolution_isomorphism(res.maps, state.maps)
        if gs is None:
            raise ApproximationVerificationFailed("resolution is not isomorphic to the canonical one")
        ginv = _invert(gs[-1])
        d_plus = res.d_plus @ ginv
    elif verify and resolution_isomorphism(res.maps, state.maps) is None:
        raise ApproximationVerificationFailed("resolution is not isomorphic to the canonical one")
    return AddQResolution(alg, i, state.maps, res.ker_f1_is_socle, d_plus, res.complete)


def _invert(g: ProjMap) -> ProjMap:
    alg, F = g.alg, g.alg.field
    A = postcompose_matrix(g, g.src)  # h -> g h on End(P(src)) -> Hom(P(src), P(tgt))
    ident = ProjMap.identity(alg, g.tgt)
    # want h: P(tgt) -> P(src) with g h = id
    A = postcompose_matrix(g, g.tgt)
    sol = linalg.solve(A, ident.flat(), F)
    if sol is None:
        raise ApproximationVerificationFailed("map is not invertible")
    return ProjMap.from_flat(alg, g.src, g.tgt, sol)


def tilting_checks(state: MutationState):
    """is_tilting on every intermediate complex P^(k) + Q, k = 0..step."""
    out = []
    for k in range(state.step + 1):
        s = MutationState(state.alg, state.vertex, state.maps[:k])
        out.append(is_tilting(s.tilting_complex()))
    return out


# ---------------------------------------------------------------------------
# bounded exploration of the mutation class


@dataclass
class ExploreResult:
    nodes: list  # presented algebras; node 0 is the input
    edges: list  # (source node, vertex, target node)
    truncated: bool = False
    unresolved: list = dc_field(default_factory=list)  # (node, node) pairs iso_search could not decide

    def table(self):
        rows = []
        for k, A in enumerate(self.nodes):
            rows.append({"node": f"n{k}", "dim": int(A.dim), "cartan": A.cartan().tolist(),
                         "loewy_length": int(A.loewy_length)})
        return rows

    def to_dot(self) -> str:
        lines = ["digraph mutation_class {"]
        for k, A in enumerate(self.nodes):
            lines.append(f'  n{k} [label="n{k}\\ndim {A.dim}"];')
        for s, v, t in self.edges:
            lines.append(f'  n{s} -> n{t} [label="{v}"];')
        if self.truncated:
            lines.append('  truncated [shape=plaintext, label="node cap reached"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {"nodes": self.table(), "edges": [list(e) for e in self.edges], "truncated": self.truncated,
                "unresolved": [list(p) for p in self.unresolved]}


def explore_mutation_class(alg, depth, vertices=None, node_cap=32, budget=None, threads=1) -> ExploreResult:
    """Breadth-first search over one-step mutations, identifying isomorphic algebras.

    The mutations of a node are computed in a thread pool; nodes are matched
    and numbered in vertex order, so the result does not depend on ``threads``.
    """
    from concurrent.futures import ThreadPoolExecutor

    from .endo import present
    from .equivalence import IsoBudget, Isomorphic, iso_search

    budget = budget or IsoBudget(max_nodes=20_000)
    nodes, edges, unresolved = [alg], [], []
    truncated = False
    frontier = [0]
    for _ in range(depth):
        nxt = []
        for k in frontier:
            A = nodes[k]
            vs = list(vertices or A.vertices)

            def child(v, A=A):
                return present(A, mutate(A, v, 1).summands()).algebra

            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    children = list(pool.map(child, vs))
            else:
                children = [child(v) for v in vs]
            for v, B in zip(vs, children):
                match, undecided = None, []
                for j, C in enumerate(nodes):
                    verdict = iso_search(B, C, budget)
                    if isinstance(verdict, Isomorphic):
                        match = j
                        break
                    if verdict.kind == "Inconclusive":
                        undecided.append(j)
                if match is None:
                    if len(nodes) >= node_cap:
                        truncated = True
                        continue
                    nodes.append(B)
                    match = len(nodes) - 1
                    nxt.append(match)
                    unresolved.extend((match, j) for j in undecided)
                edges.append((k, v, match))
        frontier = nxt
    return ExploreResult(nodes, edges, truncated, unresolved)
