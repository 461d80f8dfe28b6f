"""Endomorphism algebras of tilting complexes and their presentations.

``endo_algebra`` computes ``E = End(T_1 + ... + T_n)`` in the homotopy category
with ``e_a E e_b = Hom(T_b, T_a)`` and product given by composition.
``radical_and_quiver`` moves to a basis adapted to the radical filtration, so
the result is a :class:`BlockAlgebra` whose degree-one elements are arrows.
``extract_relations`` then writes down a presentation by quiver and relations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import (AlgebraError, AlgebraPresentation, Arrow, BlockAlgebra, Quiver, Relation, _Reducer,
                      build_algebra, path_key, path_target)
from .complexes import hom_complex, identity_map


class NotBasic(AlgebraError):
    pass


class NonSplitEndomorphism(AlgebraError):
    pass


class DegreeBoundTooSmall(AlgebraError):
    pass


class PresentationMismatch(AlgebraError):
    pass


class EndoAlgebra:
    """Homotopy classes between tilting summands with their composition table."""

    def __init__(self, alg, summands):
        self.base = alg
        self.field = alg.field
        self.summands = list(summands)
        self.n = len(self.summands)
        F = self.field
        idx = range(1, self.n + 1)
        self.spaces = {(a, b): hom_complex(self.summands[b - 1], self.summands[a - 1]) for a in idx for b in idx}
        self.dims = {k: s.dim for k, s in self.spaces.items()}
        self.mult = {}
        for a in idx:
            for b in idx:
                reps_ab = [self.spaces[(a, b)].rep(x) for x in range(self.dims[(a, b)])]
                for c in idx:
                    M = F.zeros((self.dims[(a, b)], self.dims[(b, c)], self.dims[(a, c)]))
                    if M.size:
                        target = self.spaces[(a, c)]
                        for y in range(self.dims[(b, c)]):
                            ry = self.spaces[(b, c)].rep(y)
                            for x, rx in enumerate(reps_ab):
                                M[x, y] = target.coords(rx @ ry)
                    self.mult[(a, b, c)] = M
        self.identity = {}
        for a in idx:
            self.identity[a] = self.spaces[(a, a)].coords(identity_map(self.summands[a - 1]))

    @property
    def vertices(self):
        return range(1, self.n + 1)

    @property
    def dim(self):
        return sum(self.dims.values())

    def cartan(self):
        return np.array([[self.dims[(a, b)] for b in self.vertices] for a in self.vertices], dtype=int)

    def mul(self, a, b, c, x, y):
        M = self.mult[(a, b, c)]
        if M.size == 0:
            return self.field.zeros(self.dims[(a, c)])
        F = self.field
        return F.tensordot(F.tensordot(x, M, axes=(0, 0)), y, axes=(0, 0))


def endo_algebra(alg, summands) -> EndoAlgebra:
    return EndoAlgebra(alg, summands)


# ---------------------------------------------------------------------------
# radical and Gabriel quiver


def _min_poly(E, a, x):
    """Monic minimal polynomial of x in e_a E e_a, coefficients low to high."""
    F = E.field
    powers = [E.identity[a]]
    while True:
        nxt = E.mul(a, a, a, powers[-1], x)
        A = np.stack(powers, axis=1)
        sol = linalg.solve(A, nxt, F)
        if sol is not None:
            return [F.neg(c) for c in sol] + [F.one]
        powers.append(nxt)


def _poly_eval(F, coeffs, t):
    acc = F.zero
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, t), c)
    return acc


def _power_of_linear(F, lam, k):
    """Coefficients of (t - lam)^k, low to high."""
    out = [F.one]
    for _ in range(k):
        nxt = [F.zero] * (len(out) + 1)
        for d, c in enumerate(out):
            nxt[d + 1] = F.add(nxt[d + 1], c)
            nxt[d] = F.sub(nxt[d], F.mul(lam, c))
        out = nxt
    return out


def residue_value(E, a, x, brute_limit=100003):
    """The scalar lambda with x - lambda nilpotent, for x in the local ring e_a E e_a."""
    F = E.field
    mu = _min_poly(E, a, x)
    k = len(mu) - 1
    cand = None
    if F.characteristic == 0 or k % F.characteristic:
        cand = F.mul(F.neg(mu[k - 1]), F.inv(F.elem(k)))
    elif F.size is not None and F.size <= brute_limit:
        roots = [t for t in F.elements() if _poly_eval(F, mu, t) == 0]
        if len(roots) > 1:
            raise NotBasic(f"End(T_{a}) is not local")
        cand = roots[0] if roots else None
    if cand is not None and _power_of_linear(F, cand, k) == mu:
        return cand
    if F.size is not None and F.size <= brute_limit:
        roots = [t for t in F.elements() if _poly_eval(F, mu, t) == 0]
        if len(roots) > 1:
            raise NotBasic(f"End(T_{a}) is not local")
    raise NonSplitEndomorphism(
        f"an endomorphism of summand {a} has minimal polynomial not of the form (t - c)^k over {F}; "
        "its residue field is larger than the base field, try a larger prime")


@dataclass
class RadicalData:
    algebra: BlockAlgebra  # basis adapted to the radical filtration
    change: dict  # (a, b) -> rows: new basis vectors in the raw homotopy-class coordinates
    arrows: list  # (name, a, b, index of the degree-one basis element in block (a, b))
    endo: EndoAlgebra


def radical_and_quiver(E: EndoAlgebra, reference_quiver=None) -> RadicalData:
    F = E.field
    V = list(E.vertices)
    chars = {}
    for a in V:
        d = E.dims[(a, a)]
        chars[a] = np.array([residue_value(E, a, F.eye(d)[k]) for k in range(d)], dtype=F.dtype) if d else None
        if d == 0:
            raise NotBasic(f"summand {a} is zero in the homotopy category")
    # J^1 blocks
    J = {}
    for a in V:
        for b in V:
            d = E.dims[(a, b)]
            if a == b:
                N = linalg.nullspace(chars[a].reshape(1, -1), F)
                J[(a, b)] = linalg.rref(N.T, F)[0] if N.shape[1] else F.zeros((0, d))
            else:
                J[(a, b)] = F.eye(d)
    # a product through another summand with nonzero residue means two isomorphic summands
    for a in V:
        for b in V:
            if a == b or not E.dims[(a, b)] or not E.dims[(b, a)]:
                continue
            vals = F.tensordot(E.mult[(a, b, a)], chars[a], axes=(2, 0))
            if not linalg.is_zero(vals):
                raise NotBasic(f"summands {a} and {b} are isomorphic")
    powers = [J]
    while True:
        prev = powers[-1]
        nxt, nonzero = {}, False
        for a in V:
            for c in V:
                rows = []
                for b in V:
                    X, Y = J[(a, b)], prev[(b, c)]
                    if X.shape[0] and Y.shape[0] and E.dims[(a, c)]:
                        prod = F.tensordot(F.tensordot(X, E.mult[(a, b, c)], axes=(1, 0)), Y, axes=(1, 1))
                        rows.append(prod.transpose(0, 2, 1).reshape(-1, E.dims[(a, c)]))
                if rows:
                    R = linalg.rref(np.concatenate(rows, axis=0), F)[0]
                else:
                    R = F.zeros((0, E.dims[(a, c)]))
                nxt[(a, c)] = R
                nonzero |= R.shape[0] > 0
        if not nonzero:
            break
        if len(powers) > E.dim + 1:
            raise NotBasic("radical is not nilpotent")
        powers.append(nxt)
    change, degrees, labels = {}, {}, {}
    for a in V:
        for b in V:
            d = E.dims[(a, b)]
            rows, degs = [], []
            if a == b:
                rows.append(E.identity[a])
                degs.append(0)
            for t, Jt in enumerate(powers, start=1):
                lower = powers[t][(a, b)] if t < len(powers) else F.zeros((0, d))
                layer = linalg.complement_rows(lower, Jt[(a, b)], F, width=d)
                rows.extend(layer)
                degs.extend([t] * layer.shape[0])
            C = np.array(rows, dtype=F.dtype).reshape(len(rows), d)
            if C.shape[0] != d or not linalg.is_invertible(C, F):
                raise NotBasic(f"block ({a}, {b}) has no radical-adapted basis")
            change[(a, b)] = C
            degrees[(a, b)] = np.array(degs, dtype=int)
    inv = {k: linalg.inverse(C, F) for k, C in change.items()}
    mult = {}
    for a in V:
        for b in V:
            for c in V:
                M = E.mult[(a, b, c)]
                if M.size == 0:
                    mult[(a, b, c)] = M.copy()
                    continue
                T = F.tensordot(change[(a, b)], M, axes=(1, 0))
                T = F.tensordot(change[(b, c)], T, axes=(1, 1)).transpose(1, 0, 2)
                mult[(a, b, c)] = F.tensordot(T, inv[(a, c)], axes=(2, 0))
    # arrow names
    arrows = []
    for a in V:
        for b in V:
            ks = [k for k, d in enumerate(degrees[(a, b)]) if d == 1]
            names = None
            if reference_quiver is not None:
                ref = [x.id for x in reference_quiver.arrows if x.source == a and x.target == b]
                if len(ref) == len(ks):
                    names = ref
            if names is None:
                names = [f"x{a}_{b}" if len(ks) == 1 else f"x{a}_{b}_{r + 1}" for r in range(len(ks))]
            arrows.extend((nm, a, b, k) for nm, k in zip(names, ks))
    for a in V:
        for b in V:
            lab = []
            names = {k: nm for nm, s, t, k in arrows if (s, t) == (a, b)}
            for k, d in enumerate(degrees[(a, b)]):
                lab.append(f"e{a}" if d == 0 else names.get(k, f"z{a}_{b}_{k}"))
            labels[(a, b)] = lab
    B = BlockAlgebra(F, E.n, dict(E.dims), degrees, labels, mult)
    return RadicalData(B, change, arrows, E)


# ---------------------------------------------------------------------------
# relations


@dataclass
class PresentedAlgebra:
    presentation: AlgebraPresentation
    algebra: object  # the rebuilt Algebra
    radical: RadicalData
    words: dict  # (a, b) -> standard words (arrow-name tuples) in the presented basis order
    values: dict  # (a, b) -> matrix whose columns are the presented basis in adapted coordinates

    def to_endo_coords(self, a, b, vec):
        """Adapted-basis coordinates of a presented-algebra element."""
        return self.algebra.field.matmul(self.values[(a, b)], vec)

    def from_endo_coords(self, a, b, vec):
        F = self.algebra.field
        return linalg.solve(self.values[(a, b)], vec, F)


def _standard_words(B, arrows, L):
    """Standard words (relative to deglex with lowest leading terms) and minimal non-standard ones."""
    F = B.field
    arrow_vec = {nm: B.basis_vector(a, b, k) for nm, a, b, k in arrows}
    order = {nm: r for r, (nm, *_) in enumerate(arrows)}
    out_of = {v: [x for x in arrows if x[1] == v] for v in B.vertices}
    src = {nm: a for nm, a, _, _ in arrows}
    standard = {(v,): B.unit(v) for v in B.vertices}  # key: (source, *names)
    ends = {(v,): v for v in B.vertices}
    layer = list(standard)
    minimal_nonstandard = []
    for ell in range(1, L + 1):
        cands = []
        stand_set = set(standard)
        for w in layer:
            s, end = w[0], ends[w]
            for nm, _, t, _ in out_of[end]:
                cw = w + (nm,)
                if ell >= 2 and (src[cw[2]],) + cw[2:] not in stand_set:
                    continue
                cands.append((cw, t))
        new_layer = []
        by_block = {}
        for cw, t in cands:
            by_block.setdefault((cw[0], t), []).append(cw)
        for (s, t), ws in sorted(by_block.items()):
            ws.sort(key=lambda w: tuple(order[x] for x in w[1:]), reverse=True)
            layer_idx = [k for k, d in enumerate(B.degrees[(s, t)]) if d == ell]
            rows, R, piv = [], None, []
            for w in ws:
                prev = w[:-1]
                val = B.mul(s, ends[prev], t, standard[prev], arrow_vec[w[-1]])
                proj = np.array([val[k] for k in layer_idx], dtype=F.dtype)
                fresh = not linalg.is_zero(proj) and (R is None or not linalg.in_row_space(proj, R, piv, F))
                if ell < L and fresh:
                    standard[w] = val
                    ends[w] = t
                    new_layer.append(w)
                    rows.append(proj)
                    R, piv = linalg.rref(np.array(rows, dtype=F.dtype), F)
                else:
                    minimal_nonstandard.append((w, t, val))
        layer = new_layer
    return standard, ends, minimal_nonstandard


def extract_relations(rad: RadicalData, degree_bound=None, base_presentation=None, field_raw=None) -> PresentedAlgebra:
    B = rad.algebra
    F = B.field
    L = B.loewy_length
    if degree_bound is not None and degree_bound < L:
        raise DegreeBoundTooSmall(f"the Loewy length is {L} but the bound is {degree_bound}")
    arrows = rad.arrows
    quiver = Quiver(B.n, [Arrow(nm, a, b) for nm, a, b, _ in arrows])
    standard, ends, nonstd = _standard_words(B, arrows, L)
    # standard words per block form a basis
    blocks = {}
    for w, val in standard.items():
        blocks.setdefault((w[0], ends[w]), []).append(w)
    order = {nm: r for r, (nm, *_) in enumerate(arrows)}
    inv = {}
    for a in B.vertices:
        for b in B.vertices:
            ws = sorted(blocks.get((a, b), []), key=lambda w: (len(w), tuple(order[x] for x in w[1:])))
            blocks[(a, b)] = ws
            if len(ws) != B.dims[(a, b)]:
                raise PresentationMismatch(f"block ({a}, {b}): {len(ws)} standard words for dimension {B.dims[(a, b)]}")
            if ws:
                S = np.stack([standard[w] for w in ws], axis=1)
                inv[(a, b)] = linalg.inverse(S, F)
    rels = []
    for w, t, val in nonstd:
        s = w[0]
        coeffs = F.matmul(inv[(s, t)], val) if (s, t) in inv else F.zeros(0)
        terms = [(F.one, w[1:])]
        for k, c in enumerate(coeffs):
            if c != 0:
                terms.append((F.neg(c), blocks[(s, t)][k][1:]))
        rels.append(terms)
    rels = _drop_redundant(quiver, F, rels, L)
    fraw = field_raw if field_raw is not None else F.spec()
    relations = [Relation([(F.to_json(c), tuple(p)) for c, p in r]) for r in rels]
    pres = AlgebraPresentation(F, quiver, relations, field_raw=fraw)
    built = build_algebra(pres, degree_cap=max(L + 2, 4))
    if built.dim != B.dim or not np.array_equal(built.cartan(), B.cartan()):
        raise PresentationMismatch(
            f"presented algebra has dim {built.dim} and Cartan {built.cartan().tolist()}, "
            f"expected {B.dim} and {B.cartan().tolist()}")
    values = {}
    for a in B.vertices:
        for b in B.vertices:
            cols = []
            for p in built.paths[(a, b)]:
                key = (a,) + tuple(quiver.arrows[k].id for k in p[1])
                if key in standard:
                    cols.append(standard[key])
                else:
                    cols.append(_evaluate(B, arrows, key))
            values[(a, b)] = np.stack(cols, axis=1) if cols else F.zeros((B.dims[(a, b)], 0))
    words = {k: [w[1:] for w in v] for k, v in blocks.items()}
    return PresentedAlgebra(pres, built, rad, words, values)


def _evaluate(B, arrows, key):
    vec = {nm: (a, b, B.basis_vector(a, b, k)) for nm, a, b, k in arrows}
    s = key[0]
    cur, end = B.unit(s), s
    for nm in key[1:]:
        _, t, x = vec[nm]
        cur, end = B.mul(s, end, t, cur, x), t
    return cur


def _drop_redundant(quiver, F, rels, L):
    """Greedily remove relations lying in the ideal generated by the others (modulo R^(L+1))."""

    def polys(rs):
        out = []
        for r in rs:
            poly = {}
            for c, names in r:
                p = (quiver.arrows[quiver.index[names[0]]].source, tuple(quiver.index[x] for x in names))
                poly[p] = F.add(poly.get(p, F.zero), c)
            out.append({p: c for p, c in poly.items() if c != F.zero})
        return out

    keep = list(rels)
    for r in sorted(rels, key=lambda r: (-len(r[0][1]), -len(r))):
        others = [x for x in keep if x is not r]
        red = _Reducer(quiver, F, L + 1)
        red.complete(polys(others))
        if not red.reduce(polys([r])[0]):
            keep = others
    return keep


def present(alg, summands, reference_quiver=None, degree_bound=None) -> PresentedAlgebra:
    """End of the given summands, presented by quiver and relations."""
    E = endo_algebra(alg, summands)
    ref = reference_quiver if reference_quiver is not None else getattr(alg, "quiver", None)
    rad = radical_and_quiver(E, ref)
    fraw = alg.presentation.field_raw if hasattr(alg, "presentation") else None
    return extract_relations(rad, degree_bound, field_raw=fraw)
