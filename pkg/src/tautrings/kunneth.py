"""The relative Kunneth projector calculus.

pi_0, pi_1, pi_2 are the explicit degree-1 correspondences splitting the
motive of the universal curve; products of them act slot-wise on classes.
Brauer elements act on pi_1-projected classes through contraction/insertion
at marked-point pairs, which is how the Nazarov projectors are applied
without ever expanding them in the diagram basis.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from . import brauer, symgrp, tautalg
from .brauer import BrauerElement
from .errors import DimensionMismatch
from .rationals import QQ
from .symgrp import Partition, inverse
from .tautalg import TautClass, monomial


@lru_cache(maxsize=None)
def pi_kernel_terms(i: int, g: int):
    """Kernel of pi_i on two points: input slot 1, output slot 2."""
    a = QQ(1, 2 * g - 2)
    if i == 0:
        return (
            (monomial([((1,), 1)], (), 2), a),
            (monomial([], (1,), 2), -a * a / 2),
        )
    if i == 2:
        return (
            (monomial([((2,), 1)], (), 2), a),
            (monomial([], (1,), 2), -a * a / 2),
        )
    if i == 1:
        return (
            (monomial([((1, 2), 0)], (), 2), QQ(1)),
            (monomial([((1,), 1)], (), 2), -a),
            (monomial([((2,), 1)], (), 2), -a),
            (monomial([], (1,), 2), a * a),
        )
    raise DimensionMismatch(f"projector index {i} not in 0,1,2")


def pi_class(i: int, g: int) -> TautClass:
    return TautClass(g, 2, dict(pi_kernel_terms(i, g)))


def b_class(g: int, i: int, j: int, n: int) -> TautClass:
    """b_ij on n points: the pi_1 kernel pulled back to slots (i, j)."""
    two = pi_class(1, g)
    return two.relabel_pullback({1: i, 2: j}, n)


def apply_projector_slot(a: TautClass, slot: int, i: int) -> TautClass:
    """Apply pi_i in one marked-point slot of a class."""
    g, n = a.g, a.n
    if not 1 <= slot <= n:
        raise DimensionMismatch(f"slot {slot} out of range")
    ext = a.forgetful_pullback(n + 1)
    kernel = pi_class(i, g).relabel_pullback({1: slot, 2: n + 1}, n + 1)
    prod = ext * kernel
    pushed = prod.forgetful_pushforward(slot)
    # the new point sits at position n; move it back into `slot`
    phi = {}
    for j in range(1, n + 1):
        if j < slot:
            phi[j] = j
        elif j < n:
            phi[j] = j + 1
        else:
            phi[j] = slot
    return pushed.relabel_pullback(phi, n)


def apply_projectors(a: TautClass, indices: Sequence[int]) -> TautClass:
    """(pi_{i_1} x ... x pi_{i_n}) applied to a class, slot by slot."""
    if len(indices) != a.n:
        raise DimensionMismatch("one projector index per marked point")
    out = a
    for slot, i in enumerate(indices, start=1):
        out = apply_projector_slot(out, slot, i)
    return out


def apply_pi1(a: TautClass) -> TautClass:
    return apply_projectors(a, [1] * a.n)


# ---------------------------------------------------------------------------
# correspondences


class Correspondence:
    """Self-correspondence of the n-fold power: a kernel class on 2n points
    (inputs 1..n, outputs n+1..2n)."""

    __slots__ = ("g", "n", "kernel")

    def __init__(self, g: int, n: int, kernel: TautClass):
        if kernel.n != 2 * n or kernel.g != g:
            raise DimensionMismatch("kernel must live on 2n points")
        self.g = g
        self.n = n
        self.kernel = kernel

    @property
    def degree_shift(self) -> int:
        return self.kernel.degree - self.n

    @classmethod
    def from_projectors(cls, g: int, indices: Sequence[int]) -> "Correspondence":
        n = len(indices)
        ker = TautClass.one(g, 2 * n)
        for slot, i in enumerate(indices, start=1):
            ker = ker * pi_class(i, g).relabel_pullback(
                {1: slot, 2: n + slot}, 2 * n)
        return cls(g, n, ker)

    @classmethod
    def identity(cls, g: int, n: int) -> "Correspondence":
        ker = TautClass.one(g, 2 * n)
        for slot in range(1, n + 1):
            ker = ker * TautClass.delta(g, (slot, n + slot), 2 * n)
        return cls(g, n, ker)

    def transpose(self) -> "Correspondence":
        n = self.n
        phi = {}
        for j in range(1, n + 1):
            phi[j] = n + j
            phi[n + j] = j
        return Correspondence(self.g, n,
                              self.kernel.relabel_pullback(phi, 2 * n))

    def apply(self, a: TautClass) -> TautClass:
        """(p_out)_* (p_in^*(a) . kernel)."""
        if a.g != self.g or a.n != self.n:
            raise DimensionMismatch("class does not match correspondence")
        n = self.n
        ext = a.forgetful_pullback(2 * n)
        prod = ext * self.kernel
        for slot in range(n, 0, -1):
            prod = prod.forgetful_pushforward(slot)
        return prod

    def then(self, other: "Correspondence") -> "Correspondence":
        """other o self: self applied first (Section-3.1 orientation)."""
        if (self.g, self.n) != (other.g, other.n):
            raise DimensionMismatch("correspondences on different spaces")
        n = self.n
        left = self.kernel.forgetful_pullback(3 * n)
        phi = {j: n + j for j in range(1, 2 * n + 1)}
        right = other.kernel.relabel_pullback(phi, 3 * n)
        prod = left * right
        for slot in range(2 * n, n, -1):
            prod = prod.forgetful_pushforward(slot)
        return Correspondence(self.g, n, prod)

    def __eq__(self, other):
        return (isinstance(other, Correspondence) and self.g == other.g
                and self.n == other.n and self.kernel == other.kernel)

    def __repr__(self):
        return f"Correspondence(g={self.g}, n={self.n}, {self.kernel!r})"


def projector_corr(i: int, g: int) -> Correspondence:
    return Correspondence.from_projectors(g, [i])


def compose_corr(f: Correspondence, h: Correspondence) -> Correspondence:
    """h o f (f applied first)."""
    return f.then(h)


def brauer_to_corr(x: BrauerElement, g: int) -> Correspondence:
    """Each diagram becomes the product of pulled-back pi_1 kernels over its
    strands; linear extension.  Requires delta = -2g."""
    if x.delta != QQ(-2 * g):
        raise DimensionMismatch(f"Brauer delta {x.delta} does not match genus {g}")
    if x.n_top != x.n_bottom:
        raise DimensionMismatch("need an (n,n) element")
    n = x.n_top
    total: Optional[TautClass] = None
    for d, c in x.terms.items():
        ker = TautClass.one(g, 2 * n)
        for (u, v) in d.strands:
            ker = ker * b_class(g, u, v, 2 * n)
        ker = ker.scale(c)
        total = ker if total is None else total + ker
    if total is None:
        total = TautClass.zero(g, 2 * n, n)
    return Correspondence(g, n, total)


# ---------------------------------------------------------------------------
# Brauer action on pi_1-projected classes (contraction / insertion route)


def contract_pair(a: TautClass, k: int, l: int) -> TautClass:
    """Restrict to the diagonal x_k = x_l and forget the merged point.

    On classes in the image of pi_1 on every slot this is the action of the
    (n, n-2)-diagram joining k and l on top.
    """
    if k > l:
        k, l = l, k
    pulled = a.diagonal_pullback(k, l)
    return pulled.forgetful_pushforward(k)


def insert_pair(a: TautClass, k: int, l: int) -> TautClass:
    """Add a diagonal pair at positions (k, l), then re-project those slots."""
    if k > l:
        k, l = l, k
    n = a.n + 2
    ext = a.forgetful_pullback(a.n + 1)
    ext = ext.diagonal_pushforward(a.n + 1)  # pair at (n-1, n)
    rest = [p for p in range(1, n + 1) if p not in (k, l)]
    phi = {j: rest[j - 1] for j in range(1, n - 1)}
    phi[n - 1] = k
    phi[n] = l
    out = ext.relabel_pullback(phi, n)
    out = apply_projector_slot(out, k, 1)
    out = apply_projector_slot(out, l, 1)
    return out


def apply_b_generator(a: TautClass, k: int, l: int) -> TautClass:
    """B_kl acting on a class in the image of pi_1^{x n}."""
    return insert_pair(contract_pair(a, k, l), k, l)


def act_permutation(a: TautClass, sigma) -> TautClass:
    """Action of the vertical-strand diagram embed(sigma) on a class."""
    return a.act(inverse(tuple(sigma)))


def apply_group_algebra(a: TautClass, x: symgrp.GroupAlgebraElement) -> TautClass:
    out = TautClass.zero(a.g, a.n, a.degree)
    for p, c in x.terms.items():
        out = out + act_permutation(a, p).scale(c)
    return out


def apply_brauer_diagram(a: TautClass, d: brauer.BrauerDiagram) -> TautClass:
    """Action of one diagram on a pi_1-projected class: contract the top
    horizontal pairs, route the verticals, insert the bottom pairs."""
    n = d.n_top
    if a.n != n:
        raise DimensionMismatch("diagram arity mismatch")
    n_out = d.n_bottom
    top_pairs = [s for s in d.strands if s[1] <= n]
    bottom_pairs = [(u - n, v - n) for u, v in d.strands if u > n]
    verticals = [(u, v - n) for u, v in d.strands if u <= n < v]
    out = a
    alive = list(range(1, n + 1))
    for (u, v) in sorted(top_pairs, key=lambda p: -p[1]):
        i = alive.index(u) + 1
        j = alive.index(v) + 1
        out = contract_pair(out, i, j)
        alive.remove(u)
        alive.remove(v)
    # route each vertical (u, w): the point now at position index(u) goes to
    # output slot w; unhit output slots become vacant and host the insertions
    phi = {alive.index(u) + 1: w for (u, w) in verticals}
    out = out.relabel_pullback(phi, n_out)
    for (k, l) in bottom_pairs:
        out = out * TautClass.delta(out.g, (k, l), n_out)
        out = apply_projector_slot(out, k, 1)
        out = apply_projector_slot(out, l, 1)
    return out


def apply_brauer_element(a: TautClass, x: BrauerElement) -> TautClass:
    """Linear extension of the diagram action (pi_1-projected input)."""
    out = TautClass.zero(a.g, a.n, 0)
    first = True
    for d, c in x.terms.items():
        piece = apply_brauer_diagram(a, d).scale(c)
        out = piece if first else out + piece
        first = False
    return out


# ---------------------------------------------------------------------------
# Nazarov refinement


def refined_projection(a: TautClass, lam: Partition) -> TautClass:
    """Project into the weight-|lambda| refined summand.

    pi_1^{x n} is applied first; then the Nazarov factors act left to right
    (lexicographically first factor first), the conjugate-shape Young
    symmetrizer last.  Equivalent to applying brauer_to_corr(nazarov) but
    without expanding the projector in the diagram basis.
    """
    lam = symgrp.check_partition(lam)
    n = sum(lam)
    if a.n != n:
        raise DimensionMismatch(f"class on {a.n} points, |lambda| = {n}")
    g = a.g
    out = apply_pi1(a)
    for (k, l) in brauer.nazarov_pairs(lam):
        d = brauer.nazarov_factor_denominator(lam, g, k, l)
        out = out + apply_b_generator(out, k, l).scale(QQ(1) / d)
    sym = symgrp.tableau_symmetrizer(brauer.conjugate_tableau_rows(lam), n, "ab")
    return apply_group_algebra(out, sym)


# ---------------------------------------------------------------------------
# named cycles


def gross_schoen(g: int) -> TautClass:
    """pi_1^{x3} of the small diagonal."""
    return apply_pi1(TautClass.delta(g, (1, 2, 3), 3))


def unrefined_fp(g: int) -> TautClass:
    """pi_1^{x2} of Delta_12 psi_1."""
    dia_psi = TautClass(g, 2, {monomial([((1, 2), 1)], (), 2): QQ(1)})
    return apply_pi1(dia_psi)


def refined_fp(g: int) -> TautClass:
    dia_psi = TautClass(g, 2, {monomial([((1, 2), 1)], (), 2): QQ(1)})
    return refined_projection(dia_psi, (1, 1))


NAMED_CYCLES = {
    "gross_schoen": gross_schoen,
    "unrefined_fp": unrefined_fp,
    "refined_fp": refined_fp,
    "b12": lambda g: pi_class(1, g),
}


def named_cycle(tag: str, g: int) -> TautClass:
    try:
        builder = NAMED_CYCLES[tag]
    except KeyError:
        raise DimensionMismatch(
            f"unknown cycle tag {tag!r}; known: {sorted(NAMED_CYCLES)}")
    return builder(g)


def gs_generation(g: int, n: int, m: int) -> TautClass:
    """Contract a cross power of Gross-Schoen cycles down to
    pi_1^{xn}(Delta_{1..n} psi_1^m) (or kappa_{m-1} for n = 0).

    Builds the (3N, n)-diagram with N = n+2m-2 factors: horizontal strands
    join node 3i to 3i+1 for i = 1..N-1; the first n of the remaining nodes
    become verticals, the other 2m are paired consecutively.
    """
    if n < 0 or m < 0 or n + 2 * m - 2 <= 0:
        raise DimensionMismatch("need n + 2m - 2 > 0")
    N = n + 2 * m - 2
    gs = gross_schoen(g)
    x = gs
    for _ in range(N - 1):
        x = x.cross(gs)
    chain = [(3 * i, 3 * i + 1) for i in range(1, N)]
    remaining = [p for p in range(1, 3 * N + 1)
                 if p not in {q for pair in chain for q in pair}]
    vertical = remaining[:n]
    extra = remaining[n:]
    pairs = chain + [(extra[2 * i], extra[2 * i + 1]) for i in range(m)]
    alive = list(range(1, 3 * N + 1))
    out = x
    for (u, v) in sorted(pairs, key=lambda p: -max(p)):
        i = alive.index(u) + 1
        j = alive.index(v) + 1
        out = contract_pair(out, i, j)
        alive.remove(u)
        alive.remove(v)
    assert alive == vertical
    return out
