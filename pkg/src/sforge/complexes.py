"""Bounded complexes of projectives and their homotopy category.

Grading is cohomological: ``d^n: C^n -> C^(n+1)``.  Shift: ``(C[k])^n = C^(n+k)``
with differential ``(-1)^k d``.  The cone of ``f: X -> Y`` has
``Cone^n = X^(n+1) + Y^n`` and differential ``[[-d_X, 0], [f, d_Y]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .algebra import AlgebraError
from .projmap import ProjMap, hom_offsets, postcompose_matrix, precompose_matrix


class ComplexError(AlgebraError):
    pass


class ProjComplex:
    def __init__(self, alg, terms, diffs=None, check=True):
        self.alg = alg
        self.terms = {int(n): tuple(t) for n, t in terms.items() if len(t)}
        self.diffs = {}
        diffs = diffs or {}
        for n in self.terms:
            if n + 1 in self.terms:
                d = diffs.get(n)
                if d is None:
                    d = ProjMap.zero(alg, self.terms[n + 1], self.terms[n])
                if d.src != self.terms[n] or d.tgt != self.terms[n + 1]:
                    raise ComplexError(f"differential in degree {n} has the wrong shape")
                self.diffs[n] = d
        if check and not self.is_complex():
            raise ComplexError("d o d != 0")

    @property
    def lo(self):
        return min(self.terms) if self.terms else 0

    @property
    def hi(self):
        return max(self.terms) if self.terms else 0

    def term(self, n):
        return self.terms.get(n, ())

    def d(self, n):
        if n in self.diffs:
            return self.diffs[n]
        return ProjMap.zero(self.alg, self.term(n + 1), self.term(n))

    def is_complex(self):
        return all((self.d(n + 1) @ self.d(n)).is_zero() for n in self.diffs if n + 1 in self.diffs)

    def degrees(self):
        return sorted(self.terms)

    def is_zero(self):
        return not self.terms

    def to_json(self):
        return {
            "terms": {str(n): list(t) for n, t in sorted(self.terms.items())},
            "differentials": {str(n): d.to_json() for n, d in sorted(self.diffs.items())},
        }

    def __repr__(self):
        parts = [f"{n}:{list(self.terms[n])}" for n in self.degrees()]
        return "ProjComplex(" + " -> ".join(parts) + ")"


def stalk(alg, summands, degree=0):
    if isinstance(summands, int):
        summands = (summands,)
    return ProjComplex(alg, {degree: tuple(summands)})


def shift(C: ProjComplex, k: int) -> ProjComplex:
    sign = -1 if k % 2 else 1
    terms = {n - k: t for n, t in C.terms.items()}
    diffs = {n - k: d.scale(sign) for n, d in C.diffs.items()}
    return ProjComplex(C.alg, terms, diffs, check=False)


def direct_sum(C: ProjComplex, D: ProjComplex) -> ProjComplex:
    alg = C.alg
    degs = set(C.terms) | set(D.terms)
    terms = {n: C.term(n) + D.term(n) for n in degs}
    diffs = {}
    for n in degs:
        if n + 1 in degs:
            diffs[n] = ProjMap.block(alg, [[C.d(n), None], [None, D.d(n)]],
                                     [C.term(n + 1), D.term(n + 1)], [C.term(n), D.term(n)])
    return ProjComplex(alg, terms, diffs, check=False)


@dataclass
class ChainMap:
    source: ProjComplex
    target: ProjComplex
    comps: dict  # degree -> ProjMap source^n -> target^n

    def comp(self, n):
        if n in self.comps:
            return self.comps[n]
        return ProjMap.zero(self.source.alg, self.target.term(n), self.source.term(n))

    def degrees(self):
        return sorted(set(self.source.terms) & set(self.target.terms))

    def is_chain_map(self):
        degs = set(self.source.terms) | set(self.target.terms)
        for n in degs:
            lhs = self.target.d(n) @ self.comp(n)
            rhs = self.comp(n + 1) @ self.source.d(n)
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(other.source, self.target,
                        {n: self.comp(n) @ other.comp(n) for n in self.degrees() if n in other.target.terms})

    def __add__(self, other):
        return ChainMap(self.source, self.target, {n: self.comp(n) + other.comp(n) for n in self.degrees()})

    def __sub__(self, other):
        return ChainMap(self.source, self.target, {n: self.comp(n) - other.comp(n) for n in self.degrees()})

    def scale(self, c):
        return ChainMap(self.source, self.target, {n: self.comp(n).scale(c) for n in self.degrees()})

    def is_zero(self):
        return all(self.comp(n).is_zero() for n in self.degrees())


def identity_map(C: ProjComplex) -> ChainMap:
    return ChainMap(C, C, {n: ProjMap.identity(C.alg, t) for n, t in C.terms.items()})


def cone(f: ChainMap) -> ProjComplex:
    X, Y, alg = f.source, f.target, f.source.alg
    degs = {n - 1 for n in X.terms} | set(Y.terms)
    terms = {n: X.term(n + 1) + Y.term(n) for n in degs}
    diffs = {}
    for n in degs:
        if n + 1 not in degs:
            continue
        grid = [[X.d(n + 1).scale(-1), None], [f.comp(n + 1), Y.d(n)]]
        diffs[n] = ProjMap.block(alg, grid, [X.term(n + 2), Y.term(n + 1)], [X.term(n + 1), Y.term(n)])
    return ProjComplex(alg, terms, diffs)


# ---------------------------------------------------------------------------
# homotopy classes


class HomotopyClassSpace:
    """Hom(C, D) in the homotopy category with canonical representatives.

    Chain maps are flattened degree by degree.  The null-homotopic maps are
    kept in reduced echelon form; the representatives are the echelon basis
    of the chain maps reduced modulo them, so the coordinates of any chain map
    are read off at the representatives' pivot columns.
    """

    def __init__(self, C: ProjComplex, D: ProjComplex):
        self.C, self.D, self.alg = C, D, C.alg
        F = self.alg.field
        self.degs = sorted(set(C.terms) & set(D.terms))
        self.layout, pos = {}, 0
        for n in self.degs:
            _, size = hom_offsets(self.alg, D.term(n), C.term(n))
            self.layout[n] = (pos, size)
            pos += size
        self.width = pos
        # chain-map equations: d_D phi^n - phi^(n+1) d_C = 0
        rows = []
        for n in sorted(set(C.terms) | set(D.terms)):
            tgt, src = D.term(n + 1), C.term(n)
            _, r = hom_offsets(self.alg, tgt, src)
            if r == 0:
                continue
            eq = F.zeros((r, pos))
            if n in self.layout and n + 1 in D.terms:
                o, s = self.layout[n]
                eq[:, o:o + s] = postcompose_matrix(D.d(n), C.term(n))
            if n + 1 in self.layout and n in C.terms:
                o, s = self.layout[n + 1]
                eq[:, o:o + s] = F.norm(eq[:, o:o + s] - precompose_matrix(C.d(n), D.term(n + 1)))
            rows.append(eq)
        E = np.concatenate(rows, axis=0) if rows else F.zeros((0, pos))
        Z = linalg.nullspace(E, F) if pos else F.zeros((0, 0))
        self.cycle_dim = Z.shape[1]
        # null-homotopies phi^n = d_D^(n-1) s^n + s^(n+1) d_C^n, s^n: C^n -> D^(n-1)
        hcols = []
        for n in C.terms:
            if n - 1 not in D.terms:
                continue
            _, ss = hom_offsets(self.alg, D.term(n - 1), C.term(n))
            if ss == 0:
                continue
            H = F.zeros((pos, ss))
            if n in self.layout:
                o, s = self.layout[n]
                H[o:o + s] = postcompose_matrix(D.d(n - 1), C.term(n))
            if n - 1 in self.layout and n - 1 in C.terms:
                o, s = self.layout[n - 1]
                H[o:o + s] = F.norm(H[o:o + s] + precompose_matrix(C.d(n - 1), D.term(n - 1)))
            hcols.append(H)
        if hcols and pos:
            Hm = np.concatenate(hcols, axis=1)
            self.null_rref, self.null_piv = linalg.rref(Hm.T, F)
        else:
            self.null_rref, self.null_piv = F.zeros((0, pos)), []
        self.boundary_dim = len(self.null_piv)
        if self.cycle_dim:
            self.reps = linalg.complement_rows(self.null_rref, Z.T, F, width=pos)
        else:
            self.reps = F.zeros((0, pos))
        self.rep_piv = [int(np.flatnonzero(np.asarray(r != 0, dtype=bool))[0]) for r in self.reps]

    @property
    def dim(self):
        return self.reps.shape[0]

    def unflatten(self, vec) -> ChainMap:
        comps = {}
        for n in self.degs:
            o, s = self.layout[n]
            comps[n] = ProjMap.from_flat(self.alg, self.D.term(n), self.C.term(n), vec[o:o + s])
        return ChainMap(self.C, self.D, comps)

    def flatten(self, phi: ChainMap):
        F = self.alg.field
        v = F.zeros(self.width)
        for n in self.degs:
            o, s = self.layout[n]
            if s:
                v[o:o + s] = phi.comp(n).flat()
        return v

    def rep(self, k) -> ChainMap:
        return self.unflatten(self.reps[k])

    def reduce(self, vec):
        return linalg.reduce_rows(vec, self.null_rref, self.null_piv, self.alg.field)

    def coords(self, phi):
        """Coordinates of the homotopy class of a chain map (or flat vector)."""
        vec = phi if isinstance(phi, np.ndarray) else self.flatten(phi)
        red = self.reduce(vec)
        c = np.array([red[p] for p in self.rep_piv], dtype=self.alg.field.dtype)
        if self.dim:
            back = self.alg.field.matmul(c, self.reps)
        else:
            back = self.alg.field.zeros(self.width)
        if not linalg.is_zero(self.alg.field.norm(back - red)):
            raise ComplexError("vector is not a chain map")
        return c

    def is_null_homotopic(self, phi):
        return linalg.is_zero(self.coords(phi))


def hom_complex(C, D) -> HomotopyClassSpace:
    return HomotopyClassSpace(C, D)


@dataclass
class TiltingVerdict:
    holds: bool
    failures: list  # shifts n with Hom(T, T[n]) != 0
    checked: list
    generation_checked: bool = False  # condition (2) is never verified


def is_tilting(T: ProjComplex) -> TiltingVerdict:
    """Check Hom(T, T[n]) = 0 for every nonzero n where supports overlap."""
    span = T.hi - T.lo
    failures, checked = [], []
    for n in range(-span, span + 1):
        if n == 0:
            continue
        checked.append(n)
        if hom_complex(T, shift(T, n)).dim:
            failures.append(n)
    return TiltingVerdict(not failures, failures, checked)
