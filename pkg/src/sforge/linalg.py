"""Dense exact linear algebra over a :mod:`sforge.field` field.

Matrices are numpy arrays; vectors are rows unless stated otherwise.  All
routines are deterministic: echelon forms are fully reduced and pivots are
chosen left to right, so every "canonical" basis below is reproducible.
"""

from __future__ import annotations

import numpy as np


def _nz(x):
    return np.asarray(x != 0, dtype=bool)


def rref(a, F):
    """Reduced row echelon form.  Returns ``(R, pivots)`` with zero rows dropped."""
    R = F.norm(np.array(a, dtype=F.dtype, copy=True))
    if R.ndim != 2:
        raise ValueError("rref expects a 2d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(_nz(R[r:, c]))
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = F.norm(R[r] * F.inv(R[r, c]))
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(_nz(col))
        if rows.size:
            R[rows] = F.norm(R[rows] - np.outer(col[rows], R[r]))
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(a, F) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, F)[1])


def nullspace(a, F):
    """Basis of ``{x : a @ x = 0}`` as the columns of the returned matrix."""
    a = np.asarray(a)
    m, n = a.shape
    if m == 0:
        return F.eye(n)
    R, piv = rref(a, F)
    free = [c for c in range(n) if c not in set(piv)]
    N = F.zeros((n, len(free)))
    for j, f in enumerate(free):
        N[f, j] = F.one
        for k, p in enumerate(piv):
            N[p, j] = F.neg(R[k, f])
    return N


def solve(a, b, F):
    """A particular solution ``x`` of ``a @ x = b`` (free variables zero), or None."""
    a = np.asarray(a)
    b = np.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    m, n = a.shape
    if m == 0:
        x = F.zeros((n, b.shape[1]))
        return x[:, 0] if vec else x
    aug = np.concatenate([F.norm(a), F.norm(b)], axis=1)
    R, piv = rref(aug, F)
    x = F.zeros((n, b.shape[1]))
    for k, p in enumerate(piv):
        if p >= n:
            return None
        x[p] = R[k, n:]
    return x[:, 0] if vec else x


def inverse(a, F):
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    if n == 0:
        return F.zeros((0, 0))
    R, piv = rref(np.concatenate([F.norm(a), F.eye(n)], axis=1), F)
    if len(piv) < n or piv[:n] != list(range(n)):
        return None
    return R[:, n:]


def is_invertible(a, F) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and rank(a, F) == a.shape[0]


def reduce_rows(v, R, pivots, F):
    """Reduce the rows of ``v`` modulo the row space of an rref ``R``."""
    v = F.norm(np.array(v, dtype=F.dtype, copy=True))
    single = v.ndim == 1
    if single:
        v = v.reshape(1, -1)
    for k, p in enumerate(pivots):
        coef = v[:, p].copy()
        rows = np.flatnonzero(_nz(coef))
        if rows.size:
            v[rows] = F.norm(v[rows] - np.outer(coef[rows], R[k]))
    return v[0] if single else v


def in_row_space(v, R, pivots, F) -> bool:
    return not _nz(reduce_rows(v, R, pivots, F)).any()


def complement_rows(sub, vecs, F, width=None):
    """Canonical basis (rref rows) of ``span(vecs)`` modulo ``span(sub)``."""
    vecs = np.asarray(vecs)
    if width is None:
        width = vecs.shape[1]
    if width == 0:
        return F.zeros((0, 0))
    vecs = vecs.reshape(-1, width)
    sub = np.asarray(sub).reshape(-1, width)
    if vecs.shape[0] == 0:
        return F.zeros((0, width))
    if sub.shape[0]:
        R, piv = rref(sub, F)
        vecs = reduce_rows(vecs, R, piv, F)
    out, _ = rref(vecs, F)
    return out


def is_zero(a) -> bool:
    return not _nz(np.asarray(a)).any()


def block_diag(blocks, F):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = F.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
