"""Pure-Python hot kernels.

Two inner loops dominate the engine's runtime and live here: exact sparse
row reduction over Q, and normal-form monomial merging.  A compiled twin
with identical semantics is built from _speedups.pyx; `tautrings._impl`
selects between them at import time.

Data contracts shared by both implementations:

* sparse vectors / matrix rows: dict {column index -> nonzero exact rational}
* monomial: pair (blocks, kappas); blocks is a tuple of (points, e) with
  points an ascending tuple of 1-based ints, blocks sorted by first point
  and partitioning {1..n}; kappas is a descending tuple of positive ints.
"""

from __future__ import annotations

from .rationals import QQ, bit_size

BACKEND = "pure"


# ---------------------------------------------------------------------------
# sparse exact linear algebra


def vec_axpy(vec, coef, row):
    """vec -= coef * row, in place, dropping exact zeros."""
    for c, v in row.items():
        nv = vec.get(c)
        if nv is None:
            vec[c] = -coef * v
        else:
            nv = nv - coef * v
            if nv:
                vec[c] = nv
            else:
                del vec[c]


def row_reduce(rows, ncols, reduced=True):
    """Row echelon form of sparse rows; input rows are not modified.

    Returns (pivot_cols, pivot_rows) with pivot_cols strictly increasing and
    pivot_rows[i] normalized to have entry 1 at pivot_cols[i].  With
    reduced=True the result is the (unique) RREF.  Pivot rows are chosen by
    the (nnz, bit size) heuristic to limit coefficient swell.
    """
    buckets = {}
    for idx, r in enumerate(rows):
        if r:
            r = dict(r)
            buckets.setdefault(min(r), []).append((idx, r))
    pivot_cols = []
    pivot_rows = []
    for c in range(ncols):
        group = buckets.pop(c, None)
        if not group:
            continue
        best = min(range(len(group)),
                   key=lambda i: (len(group[i][1]),
                                  bit_size(group[i][1][c]),
                                  group[i][0]))
        idx, piv = group.pop(best)
        inv = QQ(1) / piv[c]
        piv = {k: v * inv for k, v in piv.items()}
        for jdx, r in group:
            coef = r.get(c)
            if coef:
                del r[c]
                vec_axpy(r, coef, {k: v for k, v in piv.items() if k != c})
            if r:
                buckets.setdefault(min(r), []).append((jdx, r))
        pivot_cols.append(c)
        pivot_rows.append(piv)
    if reduced:
        for i in range(len(pivot_cols) - 1, 0, -1):
            c = pivot_cols[i]
            for j in range(i):
                coef = pivot_rows[j].get(c)
                if coef:
                    vec_axpy(pivot_rows[j], coef, pivot_rows[i])
    return pivot_cols, pivot_rows


class Echelon:
    """Incremental reduced row echelon form over Q.

    Rows are stored fully back-substituted and keyed by pivot column, so
    membership tests and rank queries are O(1) after each insert.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = {}

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        """Reduce a sparse vector against the current span, destructively."""
        rows = self.rows
        hits = [c for c in vec if c in rows]
        for c in hits:
            coef = vec.get(c)
            if not coef:
                continue
            del vec[c]
            vec_axpy(vec, coef, rows[c])
        return vec

    def insert(self, vec):
        """Insert a vector; returns its new pivot column, or None if dependent."""
        vec = self.reduce(dict(vec))
        if not vec:
            return None
        p = min(vec)
        inv = QQ(1) / vec[p]
        del vec[p]
        row = {c: v * inv for c, v in vec.items()}
        for r in self.rows.values():
            coef = r.get(p)
            if coef:
                del r[p]
                vec_axpy(r, coef, row)
        self.rows[p] = row
        return p

    def row(self, p):
        """Full stored row for pivot p, including the leading 1."""
        out = dict(self.rows[p])
        out[p] = QQ(1)
        return out


# ---------------------------------------------------------------------------
# normal-form monomials


def merge_monomials(m1, m2):
    """Product of two normal-form monomials on the same point set.

    Blocks merge along shared points; each redundant diagonal edge inside a
    merged component contributes one factor -psi on that component (the
    relations Delta_ij^2 = -Delta_ij psi_i and Delta_ij psi_i = Delta_ij
    psi_j); kappa multisets concatenate.  Returns (sign, monomial).
    """
    blocks1, k1 = m1
    blocks2, k2 = m2
    n = 0
    for pts, _ in blocks1:
        n += len(pts)
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = 0
    for blocks in (blocks1, blocks2):
        for pts, _ in blocks:
            r0 = find(pts[0])
            for p in pts[1:]:
                r = find(p)
                if r != r0:
                    parent[r] = r0
                edges += 1
    exp_acc = {}
    edge_acc = {}
    for blocks in (blocks1, blocks2):
        for pts, e in blocks:
            r = find(pts[0])
            exp_acc[r] = exp_acc.get(r, 0) + e
            edge_acc[r] = edge_acc.get(r, 0) + len(pts) - 1
    members = {}
    for p in range(1, n + 1):
        members.setdefault(find(p), []).append(p)
    total_redundant = 0
    out_blocks = []
    for r, pts in members.items():
        redundant = edge_acc.get(r, 0) - (len(pts) - 1)
        total_redundant += redundant
        out_blocks.append((tuple(pts), exp_acc.get(r, 0) + redundant))
    out_blocks.sort(key=lambda b: b[0][0])
    kappas = tuple(sorted(k1 + k2, reverse=True))
    sign = -1 if total_redundant & 1 else 1
    return sign, (tuple(out_blocks), kappas)


def class_mul(t1, t2):
    """Product of two term dicts {monomial: coeff} on the same point set."""
    if len(t1) > len(t2):
        t1, t2 = t2, t1
    acc = {}
    for m1, c1 in t1.items():
        for m2, c2 in t2.items():
            sign, m = merge_monomials(m1, m2)
            c = c1 * c2
            if sign < 0:
                c = -c
            prev = acc.get(m)
            if prev is None:
                acc[m] = c
            else:
                prev = prev + c
                if prev:
                    acc[m] = prev
                else:
                    del acc[m]
    return acc


def push_point(terms, i, kappa0):
    """Forgetful pushforward of a term dict along the i-th point.

    A block of size >= 2 drops the point (exponent kept); a singleton with
    exponent e integrates to kappa_{e-1}, with kappa_{-1} = 0 and kappa_0
    the supplied scalar (2g-2).  Remaining points relabel order-preserving.
    """
    acc = {}
    for (blocks, kappas), coeff in terms.items():
        new_blocks = []
        new_kappas = kappas
        dead = False
        for pts, e in blocks:
            if i in pts:
                if len(pts) > 1:
                    pts = tuple(p for p in pts if p != i)
                    new_blocks.append((pts, e))
                elif e == 0:
                    dead = True
                    break
                elif e == 1:
                    coeff = coeff * kappa0
                else:
                    new_kappas = tuple(sorted(new_kappas + (e - 1,),
                                              reverse=True))
            else:
                new_blocks.append((pts, e))
        if dead:
            continue
        relabeled = sorted(
            ((tuple(p - 1 if p > i else p for p in pts), e)
             for pts, e in new_blocks),
            key=lambda b: b[0][0],
        )
        m = (tuple(relabeled), new_kappas)
        prev = acc.get(m)
        if prev is None:
            acc[m] = coeff
        else:
            prev = prev + coeff
            if prev:
                acc[m] = prev
            else:
                del acc[m]
    return acc
