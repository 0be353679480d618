"""Normal-form tautological classes on fibered powers of the universal curve.

A monomial is a pair (blocks, kappas): blocks partition the marked points
{1..n} into clusters, each carrying a psi exponent; kappas is a descending
multiset of kappa indices.  The three relations

    Delta_ij Delta_ik = Delta_ij Delta_jk
    Delta_ij psi_i    = Delta_ij psi_j
    Delta_ij^2        = -Delta_ij psi_i

make this normal form unique; multiplication merges blocks and every
redundant diagonal edge contributes one factor -psi on its cluster.
kappa_0 = 2g-2 and kappa_{-1} = 0 are eliminated eagerly, so the genus is
part of every class.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ._impl import class_mul, merge_monomials, push_point
from .errors import DimensionMismatch
from .rationals import QQ, as_str, from_str

Monomial = Tuple[Tuple[Tuple[Tuple[int, ...], int], ...], Tuple[int, ...]]


def monomial(blocks: Iterable[Tuple[Iterable[int], int]],
             kappas: Iterable[int] = (), n: Optional[int] = None) -> Monomial:
    """Canonical monomial; unmentioned points of {1..n} become exponent-0
    singletons."""
    blk = [(tuple(sorted(pts)), int(e)) for pts, e in blocks]
    used = [p for pts, _ in blk for p in pts]
    if len(set(used)) != len(used):
        raise DimensionMismatch(f"blocks overlap: {blk}")
    if n is None:
        n = max(used, default=0)
    missing = set(range(1, n + 1)) - set(used)
    if any(p > n or p < 1 for p in used):
        raise DimensionMismatch(f"point out of range 1..{n}")
    blk.extend(((p,), 0) for p in missing)
    blk.sort(key=lambda b: b[0][0])
    ks = tuple(sorted((int(k) for k in kappas), reverse=True))
    if any(k < 1 for k in ks):
        raise DimensionMismatch("kappa indices must be >= 1 in normal form")
    return tuple(blk), ks


def monomial_n(m: Monomial) -> int:
    return sum(len(pts) for pts, _ in m[0])


def monomial_degree(m: Monomial) -> int:
    blocks, kappas = m
    return sum(len(pts) - 1 + e for pts, e in blocks) + sum(kappas)


def relabel_monomial(m: Monomial, phi: Dict[int, int], n_new: int) -> Monomial:
    """Injective relabeling; unhit new points become exponent-0 singletons."""
    blocks, kappas = m
    new_blocks = [(tuple(sorted(phi[p] for p in pts)), e) for pts, e in blocks]
    return monomial(new_blocks, kappas, n_new)


def survives_mod_equiv(m: Monomial) -> bool:
    """True unless some block is a singleton with e <= 1 or a pair with e = 0
    (the cross-product multiples of 1, psi_1 and Delta_12)."""
    for pts, e in m[0]:
        if len(pts) - 1 + e < 2:
            return False
    return True


class TautClass:
    """Homogeneous Q-linear combination of normal-form monomials."""

    __slots__ = ("g", "n", "degree", "terms")

    def __init__(self, g: int, n: int, terms: Dict[Monomial, object],
                 degree: Optional[int] = None):
        if g < 2:
            raise DimensionMismatch("genus must be >= 2")
        self.g = g
        self.n = n
        clean: Dict[Monomial, object] = {}
        for m, c in terms.items():
            c = QQ(c)
            if not c:
                continue
            if monomial_n(m) != n:
                raise DimensionMismatch(f"monomial on {monomial_n(m)} points in "
                                        f"class on {n}")
            d = monomial_degree(m)
            if degree is None:
                degree = d
            elif d != degree:
                raise DimensionMismatch("inhomogeneous class")
            clean[m] = c
        self.terms = clean
        self.degree = degree if degree is not None else 0

    # -- constructors

    @classmethod
    def zero(cls, g: int, n: int, degree: int = 0) -> "TautClass":
        return cls(g, n, {}, degree)

    @classmethod
    def one(cls, g: int, n: int) -> "TautClass":
        return cls(g, n, {monomial([], (), n): QQ(1)})

    @classmethod
    def psi(cls, g: int, i: int, n: int) -> "TautClass":
        return cls(g, n, {monomial([((i,), 1)], (), n): QQ(1)})

    @classmethod
    def kappa(cls, g: int, d: int, n: int) -> "TautClass":
        if d == -1:
            return cls.zero(g, n, 0)
        if d == 0:
            return cls.one(g, n).scale(2 * g - 2)
        return cls(g, n, {monomial([], (d,), n): QQ(1)})

    @classmethod
    def delta(cls, g: int, pts: Iterable[int], n: int) -> "TautClass":
        pts = tuple(sorted(pts))
        return cls(g, n, {monomial([(pts, 0)], (), n): QQ(1)})

    @classmethod
    def from_monomial(cls, g: int, m: Monomial, coeff=1) -> "TautClass":
        return cls(g, monomial_n(m), {m: coeff})

    # -- ring structure

    def _check(self, other: "TautClass"):
        if self.g != other.g or self.n != other.n:
            raise DimensionMismatch(
                f"(g={self.g},n={self.n}) vs (g={other.g},n={other.n})")

    def __add__(self, other: "TautClass") -> "TautClass":
        self._check(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        if self.degree != other.degree:
            raise DimensionMismatch("degree mismatch in sum")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            nv = terms.get(m, QQ(0)) + c
            if nv:
                terms[m] = nv
            else:
                terms.pop(m, None)
        return TautClass(self.g, self.n, terms, self.degree)

    def __sub__(self, other: "TautClass") -> "TautClass":
        return self + other.scale(-1)

    def scale(self, c) -> "TautClass":
        c = QQ(c)
        if not c:
            return TautClass.zero(self.g, self.n, self.degree)
        return TautClass(self.g, self.n,
                         {m: v * c for m, v in self.terms.items()}, self.degree)

    def __mul__(self, other: "TautClass") -> "TautClass":
        self._check(other)
        return TautClass(self.g, self.n, class_mul(self.terms, other.terms),
                         self.degree + other.degree)

    def __eq__(self, other) -> bool:
        return (isinstance(other, TautClass) and self.g == other.g
                and self.n == other.n and self.terms == other.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return (f"TautClass(g={self.g}, n={self.n}, deg={self.degree}, "
                f"{len(self.terms)} terms)")

    # -- tautological maps

    def forgetful_pushforward(self, i: int) -> "TautClass":
        """Integrate over the i-th fiber; degree drops by one."""
        kappa0 = QQ(2 * self.g - 2)
        acc: Dict[Monomial, object] = {}
        for m, c in push_point(self.terms, i, kappa0).items():
            acc[m] = c
        deg = self.degree - 1 if self.degree else 0
        return TautClass(self.g, self.n - 1, acc, max(deg, 0))

    def push_to_base(self) -> "TautClass":
        out = self
        for _ in range(self.n):
            out = out.forgetful_pushforward(out.n)
        return out

    def forgetful_pullback(self, m_new: int) -> "TautClass":
        """Extend to m_new >= n points (new points as exponent-0 singletons)."""
        if m_new < self.n:
            raise DimensionMismatch("pullback target smaller than source")
        phi = {i: i for i in range(1, self.n + 1)}
        return self.relabel_pullback(phi, m_new)

    def relabel_pullback(self, phi: Dict[int, int], m_new: int) -> "TautClass":
        if len(set(phi.values())) != len(phi):
            raise DimensionMismatch("relabel map must be injective")
        terms = {relabel_monomial(m, phi, m_new): c for m, c in self.terms.items()}
        return TautClass(self.g, m_new, terms, self.degree)

    def act(self, sigma: Sequence[int]) -> "TautClass":
        """Symmetric-group action: point i goes to sigma[i-1]+1 (0-based perm)."""
        phi = {i + 1: sigma[i] + 1 for i in range(self.n)}
        return self.relabel_pullback(phi, self.n)

    def diagonal_pushforward(self, i: int) -> "TautClass":
        """Insert a new point n+1 glued to point i; degree rises by one."""
        if not 1 <= i <= self.n:
            raise DimensionMismatch(f"no point {i} to duplicate")
        ext = self.forgetful_pullback(self.n + 1)
        dia = TautClass.delta(self.g, (i, self.n + 1), self.n + 1)
        return ext * dia

    def diagonal_pullback(self, i: int, j: int) -> "TautClass":
        """Identify point j with point i (restrict to the diagonal x_i = x_j),
        then relabel to n-1 points order-preserving."""
        if i == j:
            raise DimensionMismatch("diagonal pullback needs distinct points")
        acc: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            blocks, kappas = m
            bi = bj = None
            for b, (pts, e) in enumerate(blocks):
                if i in pts:
                    bi = b
                if j in pts:
                    bj = b
            new_blocks = list(blocks)
            if bi == bj:
                # Delta_ij present: excess intersection, -psi on the block
                pts, e = blocks[bi]
                new_blocks[bi] = (tuple(p for p in pts if p != j), e + 1)
                c = -c
            else:
                pi_, ei = blocks[bi]
                pj_, ej = blocks[bj]
                merged = tuple(sorted(set(pi_) | set(pj_) - {j}))
                new_blocks[bi] = (merged, ei + ej)
                del new_blocks[bj]
            relabeled = [(tuple(p - 1 if p > j else p for p in pts), e)
                         for pts, e in new_blocks]
            mm = monomial(relabeled, kappas, self.n - 1)
            nv = acc.get(mm, QQ(0)) + c
            if nv:
                acc[mm] = nv
            else:
                acc.pop(mm, None)
        return TautClass(self.g, self.n - 1, acc, self.degree)

    def cross(self, other: "TautClass") -> "TautClass":
        """Cross product: pr_1^* self . pr_2^* other on n+m points."""
        if self.g != other.g:
            raise DimensionMismatch("genus mismatch in cross product")
        n, m = self.n, other.n
        left = self.forgetful_pullback(n + m)
        phi = {i: n + i for i in range(1, m + 1)}
        right = other.relabel_pullback(phi, n + m)
        return left * right

    def reduce_mod_equiv(self) -> "TautClass":
        """Kill the ideal generated by 1, psi_1 and Delta_12 (cross-product
        multiples): drop monomials with any block of internal degree < 2."""
        terms = {m: c for m, c in self.terms.items() if survives_mod_equiv(m)}
        return TautClass(self.g, self.n, terms, self.degree)


# ---------------------------------------------------------------------------
# generators and bases


def generator_D(g: int, n: int, r: int, total_points: Optional[int] = None) -> TautClass:
    """D_{n,r}: kappa_r for n = 0 (r >= 1), Delta_{1..n} psi_1^r for n >= 1.

    Internal degree is r for n = 0 and n-1+r for n >= 1.
    """
    if n == 0:
        if r < 1:
            raise DimensionMismatch("D_{0,r} needs r >= 1")
        return TautClass.kappa(g, r, total_points or 0)
    if r < 0:
        raise DimensionMismatch("D_{n,r} needs r >= 0 for n >= 1")
    tp = total_points or n
    return TautClass(g, tp,
                     {monomial([(tuple(range(1, n + 1)), r)], (), tp): QQ(1)})


@lru_cache(maxsize=None)
def _kappa_multisets(degree: int) -> Tuple[Tuple[int, ...], ...]:
    """Descending multisets of kappa indices (each >= 1) with given total."""
    if degree == 0:
        return ((),)
    out = []

    def rec(rem: int, mx: int, acc: Tuple[int, ...]):
        if rem == 0:
            out.append(acc)
            return
        for k in range(min(rem, mx), 0, -1):
            rec(rem - k, k, acc + (k,))

    rec(degree, degree, ())
    return tuple(out)


@lru_cache(maxsize=None)
def _set_partitions(n: int) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    """All set partitions of {1..n}, blocks sorted by minimum."""
    if n == 0:
        return ((),)
    out = []
    prev = _set_partitions(n - 1)
    for part in prev:
        out.append(part + ((n,),))
        for b in range(len(part)):
            out.append(part[:b] + (part[b] + (n,),) + part[b + 1:])
    return tuple(tuple(sorted(p, key=lambda b: b[0])) for p in out)


@lru_cache(maxsize=None)
def monomial_basis(n: int, k: int, mod_equiv: bool = False) -> Tuple[Monomial, ...]:
    """All normal-form monomials of degree k on n points, canonically ordered;
    with mod_equiv only the survivors of reduce_mod_equiv."""
    out: List[Monomial] = []
    for part in _set_partitions(n):
        base = sum(len(b) - 1 for b in part)
        if base > k:
            continue
        if mod_equiv:
            min_e = [max(0, 2 - (len(b) - 1)) for b in part]
        else:
            min_e = [0] * len(part)
        slack = k - base - sum(min_e)
        if slack < 0:
            continue
        for extra in _compositions(slack, len(part) + 1):
            exps = [m + e for m, e in zip(min_e, extra[:-1])]
            kdeg = extra[-1]
            for ks in _kappa_multisets(kdeg):
                blocks = tuple((b, e) for b, e in zip(part, exps))
                out.append((blocks, ks))
    out.sort()
    return tuple(out)


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> Tuple[Tuple[int, ...], ...]:
    """Weak compositions of `total` into `parts` ordered slots."""
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


# ---------------------------------------------------------------------------
# text serialization (shared with the CLI; grammar documented in README)
#
#   class    := term (("+"|"-") term)*
#   term     := [rational "*"] factors | rational
#   factors  := factor ("*" factor)*
#   factor   := "1" | "k"INT["^"INT] | "D{"INT(","INT)*"}p"INT
#   rational := INT["/"INT]
#
# k3^2 is kappa_3 squared; D{1,3}p2 is the cluster {1,3} with psi exponent 2.


def monomial_to_str(m: Monomial) -> str:
    blocks, kappas = m
    parts: List[str] = []
    i = 0
    while i < len(kappas):
        j = i
        while j < len(kappas) and kappas[j] == kappas[i]:
            j += 1
        mult = j - i
        parts.append(f"k{kappas[i]}" + (f"^{mult}" if mult > 1 else ""))
        i = j
    for pts, e in blocks:
        if len(pts) == 1 and e == 0:
            continue
        parts.append("D{" + ",".join(str(p) for p in pts) + "}p" + str(e))
    return " * ".join(parts) if parts else "1"


def class_to_str(x: TautClass) -> str:
    if not x.terms:
        return "0"
    bits: List[str] = []
    for m in sorted(x.terms):
        c = x.terms[m]
        ms = monomial_to_str(m)
        neg = c < 0
        c_abs = -c if neg else c
        if ms == "1":
            body = as_str(c_abs)
        elif c_abs == 1:
            body = ms
        else:
            body = f"{as_str(c_abs)} * {ms}"
        if not bits:
            bits.append(("-" if neg else "") + body)
        else:
            bits.append(("- " if neg else "+ ") + body)
    return " ".join(bits)


def parse_class(text: str, g: int, n: int) -> TautClass:
    """Parse the canonical grammar back into a TautClass."""
    text = text.strip()
    if text == "0":
        return TautClass.zero(g, n)
    terms: Dict[Monomial, object] = {}
    for sign, chunk in _split_terms(text):
        coeff, m = _parse_term(chunk, n)
        coeff = coeff if sign > 0 else -coeff
        terms[m] = terms.get(m, QQ(0)) + coeff
    return TautClass(g, n, terms)


def _split_terms(text: str):
    # terms are joined by " + " / " - "; a bare leading "-" negates the first
    out = []
    sign = 1
    if text.startswith("-"):
        sign = -1
        text = text[1:].strip()
    cur = text
    while cur:
        plus = cur.find(" + ")
        minus = cur.find(" - ")
        cut = min(x for x in (plus, minus) if x >= 0) if max(plus, minus) >= 0 else -1
        if cut < 0:
            out.append((sign, cur.strip()))
            break
        out.append((sign, cur[:cut].strip()))
        sign = 1 if cur[cut:cut + 3] == " + " else -1
        cur = cur[cut + 3:]
    return out


def _parse_term(chunk: str, n: int) -> Tuple[object, Monomial]:
    coeff = QQ(1)
    blocks: List[Tuple[Tuple[int, ...], int]] = []
    kappas: List[int] = []
    for raw in chunk.split("*"):
        tok = raw.strip()
        if not tok or tok == "1":
            continue
        if tok.startswith("k"):
            body = tok[1:]
            if "^" in body:
                idx, mult = body.split("^")
                kappas.extend([int(idx)] * int(mult))
            else:
                kappas.append(int(body))
        elif tok.startswith("D{"):
            inner, _, tail = tok[2:].partition("}")
            pts = tuple(int(p) for p in inner.split(","))
            if not tail.startswith("p"):
                raise ValueError(f"bad block factor: {tok}")
            blocks.append((pts, int(tail[1:])))
        else:
            coeff = coeff * from_str(tok)
    return coeff, monomial(blocks, kappas, n)


def class_to_json(x: TautClass) -> dict:
    return {
        "g": x.g,
        "n": x.n,
        "degree": x.degree,
        "monomials": [
            {
                "blocks": [[list(pts), e] for pts, e in m[0]],
                "kappas": list(m[1]),
                "coeff": as_str(x.terms[m]),
            }
            for m in sorted(x.terms)
        ],
    }


def class_from_json(doc: dict) -> TautClass:
    terms: Dict[Monomial, object] = {}
    n = doc["n"]
    for rec in doc["monomials"]:
        m = monomial([(tuple(pts), e) for pts, e in rec["blocks"]],
                     rec["kappas"], n)
        terms[m] = from_str(rec["coeff"])
    return TautClass(doc["g"], n, terms)
