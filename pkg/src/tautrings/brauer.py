"""The Brauer category: diagrams, delta-composition with loop erasure,
Nazarov projectors and trace/dimension oracles.

An (n,m)-diagram is a perfect matching on n top nodes (labels 1..n) and m
bottom nodes (labels n+1..n+m), stored as a sorted tuple of sorted pairs.
compose(f, g) glues f's bottom row to g's top row (f applied first); with
this convention embed_permutation is multiplicative for the symgrp
composition "apply the right factor first".
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

from . import symgrp
from .errors import DimensionMismatch, NazarovDenominator
from .rationals import QQ
from .symgrp import GroupAlgebraElement, Partition, Perm

Matching = Tuple[Tuple[int, int], ...]


def _canon(pairs: Iterable[Sequence[int]]) -> Matching:
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


class BrauerDiagram:
    __slots__ = ("n_top", "n_bottom", "strands")

    def __init__(self, n_top: int, n_bottom: int, strands: Iterable[Sequence[int]]):
        if (n_top + n_bottom) % 2:
            raise DimensionMismatch("n_top + n_bottom must be even")
        self.n_top = n_top
        self.n_bottom = n_bottom
        self.strands = _canon(strands)
        nodes = sorted(x for p in self.strands for x in p)
        if nodes != list(range(1, n_top + n_bottom + 1)):
            raise DimensionMismatch("strands must perfectly match all nodes")

    def __eq__(self, other):
        return (isinstance(other, BrauerDiagram)
                and (self.n_top, self.n_bottom, self.strands)
                == (other.n_top, other.n_bottom, other.strands))

    def __hash__(self):
        return hash((self.n_top, self.n_bottom, self.strands))

    def __repr__(self):
        return f"BrauerDiagram({self.n_top},{self.n_bottom},{self.strands})"

    def has_horizontal(self) -> bool:
        nt = self.n_top
        return any((a <= nt) == (b <= nt) for a, b in self.strands)

    def vertical_perm(self) -> Perm:
        """For an all-vertical (n,n)-diagram the sigma with strands
        (sigma(i), n+i); inverse of embed_permutation."""
        if self.has_horizontal() or self.n_top != self.n_bottom:
            raise DimensionMismatch("diagram is not a permutation diagram")
        n = self.n_top
        out = [0] * n
        for a, b in self.strands:
            out[b - n - 1] = a - 1
        return tuple(out)


def identity_diagram(n: int) -> BrauerDiagram:
    return BrauerDiagram(n, n, [(i, n + i) for i in range(1, n + 1)])


def permutation_diagram(sigma: Perm) -> BrauerDiagram:
    n = len(sigma)
    return BrauerDiagram(n, n, [(sigma[i - 1] + 1, n + i) for i in range(1, n + 1)])


def b_diagram(n: int, i: int, j: int) -> BrauerDiagram:
    """B_ij: horizontal (i,j) on top and bottom, all else vertical."""
    pairs = [(i, j), (n + i, n + j)]
    for k in range(1, n + 1):
        if k != i and k != j:
            pairs.append((k, n + k))
    return BrauerDiagram(n, n, pairs)


def compose_diagrams(f: BrauerDiagram, g: BrauerDiagram) -> Tuple[int, BrauerDiagram]:
    """Glue f's bottom to g's top; returns (erased loop count, diagram)."""
    if f.n_bottom != g.n_top:
        raise DimensionMismatch("middle arities do not match")
    n, m, k = f.n_top, f.n_bottom, g.n_bottom
    # node coordinates: ('t', i) top of f, ('m', i) glued middle, ('b', i) bottom of g
    adj: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}

    def add(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for a, b in f.strands:
        pa = ("t", a) if a <= n else ("m", a - n)
        pb = ("t", b) if b <= n else ("m", b - n)
        add(pa, pb)
    for a, b in g.strands:
        pa = ("m", a) if a <= m else ("b", a - m)
        pb = ("m", b) if b <= m else ("b", b - m)
        add(pa, pb)
    seen = set()
    new_pairs = []
    loops = 0
    # walk paths starting from outer nodes
    outer = [("t", i) for i in range(1, n + 1)] + [("b", i) for i in range(1, k + 1)]
    for start in outer:
        if start in seen:
            continue
        seen.add(start)
        prev = start
        cur = adj[start][0]
        while cur[0] == "m":
            seen.add(cur)
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
        seen.add(cur)
        a = start[1] if start[0] == "t" else n + start[1]
        b = cur[1] if cur[0] == "t" else n + cur[1]
        new_pairs.append((a, b))
    new_pairs = [tuple(sorted(p)) for p in new_pairs]
    new_pairs = sorted(set(new_pairs))
    # remaining middle nodes form loops
    mid_seen = {c[1] for c in seen if c[0] == "m"}
    for i in range(1, m + 1):
        if i in mid_seen:
            continue
        loops += 1
        prev = ("m", i)
        mid_seen.add(i)
        cur = adj[prev][0]
        while cur != ("m", i):
            mid_seen.add(cur[1])
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
    return loops, BrauerDiagram(n, k, new_pairs)


class BrauerElement:
    """Q-linear combination of (n,m)-diagrams with loop parameter delta."""

    __slots__ = ("delta", "n_top", "n_bottom", "terms")

    def __init__(self, delta, n_top: int, n_bottom: int,
                 terms: Dict[BrauerDiagram, object]):
        self.delta = QQ(delta)
        self.n_top = n_top
        self.n_bottom = n_bottom
        self.terms = {}
        for d, c in terms.items():
            if (d.n_top, d.n_bottom) != (n_top, n_bottom):
                raise DimensionMismatch("mixed arities in Brauer element")
            c = QQ(c)
            if c:
                self.terms[d] = c

    @classmethod
    def from_diagram(cls, delta, d: BrauerDiagram, coeff=1) -> "BrauerElement":
        return cls(delta, d.n_top, d.n_bottom, {d: coeff})

    @classmethod
    def identity(cls, delta, n: int) -> "BrauerElement":
        return cls.from_diagram(delta, identity_diagram(n))

    def __add__(self, other: "BrauerElement") -> "BrauerElement":
        self._check_compat(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            nv = terms.get(d, QQ(0)) + c
            if nv:
                terms[d] = nv
            else:
                terms.pop(d, None)
        return BrauerElement(self.delta, self.n_top, self.n_bottom, terms)

    def scale(self, c) -> "BrauerElement":
        c = QQ(c)
        return BrauerElement(self.delta, self.n_top, self.n_bottom,
                             {d: v * c for d, v in self.terms.items()})

    def _check_compat(self, other: "BrauerElement"):
        if self.delta != other.delta:
            raise DimensionMismatch("loop parameters differ")
        if (self.n_top, self.n_bottom) != (other.n_top, other.n_bottom):
            raise DimensionMismatch("arities differ")

    def __eq__(self, other):
        return (isinstance(other, BrauerElement)
                and self.delta == other.delta
                and (self.n_top, self.n_bottom) == (other.n_top, other.n_bottom)
                and self.terms == other.terms)

    def __repr__(self):
        return (f"BrauerElement(delta={self.delta}, ({self.n_top},{self.n_bottom}),"
                f" {len(self.terms)} diagrams)")


def compose(f: BrauerElement, g: BrauerElement) -> BrauerElement:
    """Bilinear extension of diagram gluing (f first, g below)."""
    if f.delta != g.delta:
        raise DimensionMismatch("loop parameters differ")
    if f.n_bottom != g.n_top:
        raise DimensionMismatch("middle arities do not match")
    acc: Dict[BrauerDiagram, object] = {}
    delta = f.delta
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            loops, d = compose_diagrams(d1, d2)
            c = c1 * c2 * delta ** loops
            nv = acc.get(d, QQ(0)) + c
            if nv:
                acc[d] = nv
            else:
                acc.pop(d, None)
    return BrauerElement(delta, f.n_top, g.n_bottom, acc)


def embed_permutation(sigma: Perm, delta) -> BrauerElement:
    return BrauerElement.from_diagram(delta, permutation_diagram(sigma))


def embed_group_algebra(x: GroupAlgebraElement, delta) -> BrauerElement:
    terms = {permutation_diagram(p): c for p, c in x.terms.items()}
    return BrauerElement(delta, x.n, x.n, terms)


def kill_horizontal(x: BrauerElement) -> GroupAlgebraElement:
    """Algebra homomorphism splitting embed: horizontal strands go to zero."""
    if x.n_top != x.n_bottom:
        raise DimensionMismatch("need an (n,n) element")
    terms: Dict[Perm, object] = {}
    for d, c in x.terms.items():
        if d.has_horizontal():
            continue
        terms[d.vertical_perm()] = terms.get(d.vertical_perm(), QQ(0)) + c
    return GroupAlgebraElement(x.n_top, terms)


def b_element(n: int, i: int, j: int, delta) -> BrauerElement:
    return BrauerElement.from_diagram(delta, b_diagram(n, i, j))


def nazarov_pairs(lam: Partition) -> List[Tuple[int, int]]:
    """Ordered (k,l) pairs with boxes k,l in distinct rows of the row tableau."""
    lam = symgrp.check_partition(lam)
    rows = []
    k = 1
    for part in lam:
        rows.append(set(range(k, k + part)))
        k += part
    n = sum(lam)
    row_of = {}
    for idx, r in enumerate(rows):
        for x in r:
            row_of[x] = idx
    return [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)
            if row_of[a] != row_of[b]]


def nazarov_factor_denominator(lam: Partition, g: int, k: int, l: int):
    contents = symgrp.row_tableau_contents(lam)
    d = 2 * g + 1 + contents[k - 1] + contents[l - 1]
    if d == 0:
        raise NazarovDenominator(k, l, lam, g)
    return QQ(d)


def conjugate_tableau_rows(lam: Partition) -> Tuple[Tuple[int, ...], ...]:
    """Tableau of shape lambda^T whose rows are the columns of lambda's row
    tableau (the transposed filling, so box labels match the contents c_k)."""
    rows_lam = symgrp._row_tableau_rows(lam)
    width = max((len(r) for r in rows_lam), default=0)
    return tuple(tuple(r[j] for r in rows_lam if len(r) > j)
                 for j in range(width))


def nazarov_projector(lam: Partition, g: int) -> BrauerElement:
    """Idempotent of B^(-2g)(n,n) projecting into the weight-|lambda| summand.

    Ordered product over (k,l), lexicographic, of (1 + B_kl/(2g+1+c_k+c_l)),
    composed with the Young symmetrizer for the conjugate shape carried by
    the transposed filling.  The image on the 2g-dimensional odd symplectic
    space is one copy of the lambda irreducible inside its isotypic summand:
    closed_trace gives (-1)^n dim V<lambda>.
    """
    lam = symgrp.check_partition(lam)
    n = sum(lam)
    delta = QQ(-2 * g)
    c = embed_group_algebra(
        symgrp.tableau_symmetrizer(conjugate_tableau_rows(lam), n, "ab"), delta)
    ident = BrauerElement.identity(delta, n)
    result = c
    # mul(x, y) applies y first: stacking the factors right-to-left makes the
    # lexicographically first factor act first, then the symmetrizer last.
    for (k, l) in reversed(nazarov_pairs(lam)):
        d = nazarov_factor_denominator(lam, g, k, l)
        factor = ident + b_element(n, k, l, delta).scale(QQ(1) / d)
        result = compose(result, factor)
    return result


def closed_trace(x: BrauerElement):
    """Categorical (super)trace: close each diagram top-to-bottom and count
    loops; each loop contributes one factor delta."""
    if x.n_top != x.n_bottom:
        raise DimensionMismatch("need an (n,n) element")
    n = x.n_top
    total = QQ(0)
    for d, c in x.terms.items():
        partner_d = {}
        for a, b in d.strands:
            partner_d[a] = b
            partner_d[b] = a
        seen = set()
        loops = 0
        # alternate diagram strands with the closure arcs i <-> n+i
        for start in range(1, 2 * n + 1):
            if start in seen:
                continue
            loops += 1
            cur = start
            use_d = True
            while True:
                seen.add(cur)
                if use_d:
                    cur = partner_d[cur]
                else:
                    cur = cur + n if cur <= n else cur - n
                use_d = not use_d
                if cur == start:
                    break
        total += c * x.delta ** loops
    return total


# ---------------------------------------------------------------------------
# independent dimension oracles (Weyl)


def sp_dim(lam: Partition, g: int) -> int:
    """Dimension of the irreducible Sp(2g) representation, Weyl formula."""
    lam = symgrp.check_partition(lam)
    if len(lam) > g:
        return 0
    full = list(lam) + [0] * (g - len(lam))
    l = [full[i] + g - i for i in range(g)]  # 1-based: lam_i + g - i + 1
    m = [g - i for i in range(g)]
    num = 1
    den = 1
    for i in range(g):
        num *= l[i]
        den *= m[i]
        for j in range(i + 1, g):
            num *= l[i] ** 2 - l[j] ** 2
            den *= m[i] ** 2 - m[j] ** 2
    assert num % den == 0
    return num // den


def traceless_dim(n: int, g: int) -> int:
    """dim of the traceless subspace of the n-th tensor power, via the
    hook-length and Weyl product formulas (independent of diagram closure)."""
    return sum(symgrp.hook_dim(lam) * sp_dim(lam, g)
               for lam in symgrp.partitions(n))
