"""Independent oracles used to freeze derived values.

Nothing here imports the package: the oracle reads the plain JSON form of a
presentation and works with dictionaries of paths over F_p.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def _coeff(raw, p):
    if isinstance(raw, int):
        return raw % p
    q = Fraction(raw)
    return q.numerator * pow(q.denominator, -1, p) % p


def _paths(arrows, n, length):
    """All paths with exactly ``length`` arrows, as (source, tuple of ids)."""
    out = [(v, ()) for v in range(1, n + 1)]
    for _ in range(length):
        out = [(s, w + (a["id"],)) for s, w in out for a in arrows
               if a["source"] == (s if not w else _tgt(arrows, w[-1]))]
    return out


def _tgt(arrows, aid):
    return next(a["target"] for a in arrows if a["id"] == aid)


def _end(arrows, path):
    s, w = path
    return _tgt(arrows, w[-1]) if w else s


def _key(word):
    return (len(word), word)


def _reduce(row, pivots, p):
    """Reduce a sparse row {word: c} against pivots keyed by their largest word."""
    row = dict(row)
    while row:
        top = max(row, key=_key)
        piv = pivots.get(top)
        if piv is None:
            return row
        c = row[top]
        for w, v in piv.items():
            nv = (row.get(w, 0) - c * v) % p
            if nv:
                row[w] = nv
            else:
                row.pop(w, None)
    return row


def path_algebra_dimension(obj, max_length=14):
    """dim KQ/I by naive reduction of all u*r*v in the truncated path algebra.

    The truncation length D grows until every path of length D lies in the
    span, at which point R^D is inside the ideal and the count is exact.
    Returns (dim, D, per-block dims).
    """
    p = obj["field"]["prime"]
    n, arrows = obj["vertices"], obj["arrows"]
    rels = [[(_coeff(t["coeff"], p), tuple(t["path"])) for t in r] for r in obj["relations"]]
    by_len = {0: _paths(arrows, n, 0)}
    for D in range(2, max_length + 1):
        for k in range(1, D + 1):
            by_len.setdefault(k, _paths(arrows, n, k))
        pivots = {}
        for rel in rels:
            src = next(a["source"] for a in arrows if a["id"] == rel[0][1][0])
            tgt = _tgt(arrows, rel[0][1][-1])
            short = min(len(w) for _, w in rel)
            for lu, lv in product(range(D - short + 1), repeat=2):
                if lu + lv + short > D:
                    continue
                us = [w for s, w in by_len[lu] if _end(arrows, (s, w)) == src]
                vs = [w for s, w in by_len[lv] if s == tgt]
                for u in us:
                    for v in vs:
                        row = {}
                        for c, w in rel:
                            word = u + w + v
                            if len(word) <= D:
                                row[word] = (row.get(word, 0) + c) % p
                        row = {w: c for w, c in row.items() if c}
                        red = _reduce(row, pivots, p)
                        if red:
                            top = max(red, key=_key)
                            inv = pow(red[top], -1, p)
                            pivots[top] = {w: c * inv % p for w, c in red.items()}
        longest = [w for _, w in by_len[D]]
        if all(not _reduce({w: 1}, pivots, p) for w in longest):
            blocks = {}
            for k in range(D):
                for s, w in by_len[k]:
                    if w not in pivots:
                        key = (s, _end(arrows, (s, w)))
                        blocks[key] = blocks.get(key, 0) + 1
            return sum(blocks.values()), D, blocks
    raise RuntimeError("oracle truncation bound too small")


def nakayama_block_dims(n, ell):
    """dim e_i N(n, ell) e_j by counting paths of length < ell on the cycle."""
    dims = {}
    for i in range(1, n + 1):
        for k in range(ell):
            j = (i - 1 + k) % n + 1
            dims[(i, j)] = dims.get((i, j), 0) + 1
    return dims


def brute_rank_mod_p(rows, p):
    """Rank of an integer matrix (list of lists) over F_p by plain elimination."""
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    width = len(m[0]) if m else 0
    while rank < len(m) and col < width:
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[rank])]
        rank += 1
        col += 1
    return rank


def nakayama_simple_period(n, ell, i, bound=64):
    """Period of S_i over N(n, ell) from the uniserial syzygy rule.

    A uniserial module is (top, length); its syzygy is the bottom part of the
    projective cover, (top + length, ell - length), with vertices mod n.
    """
    top, length = i, 1
    for d in range(1, bound + 1):
        top, length = (top - 1 + length) % n + 1, ell - length
        if (top, length) == (i, 1):
            return d
    return None
