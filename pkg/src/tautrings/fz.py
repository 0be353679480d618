"""The Faber-Zagier relation generator.

Exact power series A, B, C_0 = log A, C_n; kappa- and Delta-bracket
operators; the assembled codimension-r relation on n points; and the
harvest tactics (monomial multiples, diagonal pushforwards, psi-multiplied
forgetful pushforwards) used to cut quotient spaces down.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import tautalg
from .errors import InvalidFZSpec
from .rationals import QQ
from .tautalg import Monomial, TautClass, monomial, monomial_basis

# ---------------------------------------------------------------------------
# exact series


class SeriesCoeffs:
    """Truncated exact power series: coeffs[i] is the z^i coefficient."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[object]):
        self.coeffs = [QQ(c) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int):
        if i < 0:
            return QQ(0)
        if i >= len(self.coeffs):
            raise IndexError(f"coefficient z^{i} beyond truncation {self.order}")
        return self.coeffs[i]

    def __eq__(self, other):
        return isinstance(other, SeriesCoeffs) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"SeriesCoeffs({self.coeffs!r})"


@lru_cache(maxsize=None)
def _a_coeff(i: int):
    return QQ(factorial(6 * i), factorial(2 * i) * factorial(3 * i))


@lru_cache(maxsize=None)
def _b_coeff(i: int):
    return _a_coeff(i) * QQ(6 * i + 1, 6 * i - 1)


@lru_cache(maxsize=None)
def _log_a_coeff(k: int):
    # F = 1 + sum a_k z^k; k l_k = k a_k - sum_{j<k} j l_j a_{k-j}
    if k == 0:
        return QQ(0)
    total = QQ(k) * _a_coeff(k)
    for j in range(1, k):
        total -= QQ(j) * _log_a_coeff(j) * _a_coeff(k - j)
    return total / QQ(k)


@lru_cache(maxsize=None)
def _c_coeff(n: int, r: int):
    if n == 0:
        return _log_a_coeff(r)
    if n == 1:
        # C_1 = B/A
        total = _b_coeff(r)
        for j in range(1, r + 1):
            total -= _a_coeff(j) * _c_coeff(1, r - j)
        return total
    # C_{n+1} = (12 z^2 d/dz - 4 n z) C_n, coefficientwise
    if r == 0:
        return QQ(0)
    return QQ(12 * (r - 1) - 4 * (n - 1)) * _c_coeff(n - 1, r - 1)


def series_A(order: int) -> SeriesCoeffs:
    return SeriesCoeffs([_a_coeff(i) for i in range(order + 1)])


def series_B(order: int) -> SeriesCoeffs:
    return SeriesCoeffs([_b_coeff(i) for i in range(order + 1)])


def series_C(n: int, order: int) -> SeriesCoeffs:
    if n < 0:
        raise InvalidFZSpec("series C_n needs n >= 0")
    return SeriesCoeffs([_c_coeff(n, i) for i in range(order + 1)])


def positivity_scan(max_n: int, max_r: int) -> dict:
    """Check strict positivity of [C_n]_{z^r} on the generator range
    (n = 0, r >= 1; n >= 1, r >= n-1), except [C_1]_{z^0} < 0."""
    violations = []
    exception_seen = False
    for n in range(0, max_n + 1):
        r0 = 1 if n == 0 else max(n - 1, 0)
        for r in range(r0, max_r + 1):
            v = _c_coeff(n, r)
            if n == 1 and r == 0:
                exception_seen = v < 0
                if not exception_seen:
                    violations.append((n, r, v))
                continue
            if not v > 0:
                violations.append((n, r, v))
    return {
        "max_n": max_n,
        "max_r": max_r,
        "violations": violations,
        "negative_exception_c1_z0": exception_seen or max_n < 1,
        "ok": not violations,
    }


# ---------------------------------------------------------------------------
# the relation


@dataclass(frozen=True)
class FZSpec:
    g: int
    n: int
    r: int

    def excess(self) -> int:
        return 3 * self.r - self.g - 1 - self.n

    def is_valid(self) -> bool:
        e = self.excess()
        return e >= 0 and e % 2 == 0

    def check(self) -> "FZSpec":
        if self.g < 2 or self.n < 0 or self.r < 0:
            raise InvalidFZSpec(f"bad parameters (g,n,r)=({self.g},{self.n},{self.r})")
        if not self.is_valid():
            raise InvalidFZSpec(
                f"3r-g-1-n = {self.excess()} is not a nonnegative even integer "
                f"for (g,n,r)=({self.g},{self.n},{self.r})")
        return self


def _kappa_exp_factor(r: int) -> List[Dict[Tuple[Tuple[int, ...]], object]]:
    """z-graded coefficients of exp(-{log A}_kappa), as {kappa multiset: coeff}.

    Degree-d slice: e_d = -(1/d) sum_j (j l_j kappa_j) e_{d-j}.
    """
    slices: List[Dict[Tuple[int, ...], object]] = [{(): QQ(1)}]
    for d in range(1, r + 1):
        acc: Dict[Tuple[int, ...], object] = {}
        for j in range(1, d + 1):
            lj = _log_a_coeff(j)
            if not lj:
                continue
            for ks, c in slices[d - j].items():
                nks = tuple(sorted(ks + (j,), reverse=True))
                nv = acc.get(nks, QQ(0)) - QQ(j) * lj * c
                if nv:
                    acc[nks] = nv
                else:
                    acc.pop(nks, None)
        slices.append({k: v / QQ(d) for k, v in acc.items()})
    return slices


def fz_relation(spec: FZSpec) -> TautClass:
    """The codimension-r tautological relation on n points.

    [ exp(-{log A}_kappa) * sum over set partitions P of {1..n} of
      prod_{S in P} {C_|S|}_{Delta_S} ]_{z^r},
    where {F}_kappa = sum kappa_i a_i z^i and {F}_{Delta_S} =
    sum (-1)^{|S|-1} Delta_S psi_S^{i-|S|+1} a_i z^i (negative psi powers
    discarded; Delta of a singleton is 1).  Vanishes in CH^r(C_g^n).
    """
    spec.check()
    g, n, r = spec.g, spec.n, spec.r
    kappa_slices = _kappa_exp_factor(r)
    # partition sum, z-graded: dicts {(blocks tuple, ()) -> coeff} by degree
    part_slices: List[Dict[Tuple, object]] = [dict() for _ in range(r + 1)]
    for part in tautalg._set_partitions(n):
        min_z = sum(len(b) - 1 for b in part)
        if min_z > r:
            continue
        # per-block bracket: list over z of (exponent, coeff)
        prod: List[Dict[Tuple, object]] = [dict() for _ in range(r + 1)]
        prod[0][()] = QQ(1)
        for block in part:
            s = len(block)
            sign = -1 if (s - 1) % 2 else 1
            nxt: List[Dict[Tuple, object]] = [dict() for _ in range(r + 1)]
            for base_d, layer in enumerate(prod):
                if not layer:
                    continue
                for i in range(s - 1, r - base_d + 1):
                    ci = _c_coeff(s, i)
                    if not ci:
                        continue
                    if sign < 0:
                        ci = -ci
                    e = i - s + 1
                    for blocks_acc, c in layer.items():
                        key = blocks_acc + ((block, e),)
                        tgt = nxt[base_d + i]
                        nv = tgt.get(key, QQ(0)) + c * ci
                        if nv:
                            tgt[key] = nv
                        else:
                            tgt.pop(key, None)
            prod = nxt
        for d in range(min_z, r + 1):
            for key, c in prod[d].items():
                tgt = part_slices[d]
                nv = tgt.get(key, QQ(0)) + c
                if nv:
                    tgt[key] = nv
                else:
                    tgt.pop(key, None)
    terms: Dict[Monomial, object] = {}
    for dk in range(0, r + 1):
        kap = kappa_slices[dk]
        if not kap:
            continue
        for ks, ck in kap.items():
            for key, cp in part_slices[r - dk].items():
                m = monomial(key, ks, n)
                nv = terms.get(m, QQ(0)) + ck * cp
                if nv:
                    terms[m] = nv
                else:
                    terms.pop(m, None)
    return TautClass(g, n, terms, r)


def fz_class(g: int, n: int, r: int) -> TautClass:
    return fz_relation(FZSpec(g, n, r))


def valid_r_values(g: int, n: int, r_max: int) -> List[int]:
    return [r for r in range(0, r_max + 1) if FZSpec(g, n, r).is_valid()]


# ---------------------------------------------------------------------------
# harvest tactics


@dataclass(frozen=True)
class HarvestConfig:
    """Tactic depths for relation harvesting.

    diagonal_depth: how many diagonal pushforwards of lower-arity relations.
    forgetful_depth: how many extra points j in pushforwards of m * FZ(g,n+j,r).
    forgetful_monomial_cap: degree cap for the multiplier m in the forgetful
        tactic; m must touch the forgotten points (kappa factors are free).
    """

    diagonal_depth: int = 2
    forgetful_depth: int = 2
    forgetful_monomial_cap: int = 3

    def key(self) -> str:
        return (f"d{self.diagonal_depth}f{self.forgetful_depth}"
                f"c{self.forgetful_monomial_cap}")


DEFAULT_CONFIG = HarvestConfig()


def _touches(m: Monomial, points: Sequence[int]) -> bool:
    """Every nontrivial block of m meets `points` (kappas are unrestricted)."""
    pts = set(points)
    for blk, e in m[0]:
        if (len(blk) > 1 or e > 0) and not (pts & set(blk)):
            return False
    return True


def harvest_relations(g: int, n: int, k: int,
                      config: HarvestConfig = DEFAULT_CONFIG
                      ) -> Iterator[Tuple[str, TautClass]]:
    """Yield (tier label, relation class) of degree k on n points.

    Tier "inplace": m * FZ(g,n,r) over all monomials m of degree k-r.
    Tier "diagonal-d": iterated diagonal pushforwards of FZ(g,n-d,r), times
        monomials of the complementary degree (pushforward happens first).
    Tier "forgetful-j": pushforwards of m * FZ(g,n+j,r) along the last j
        points, with m touching the forgotten points.
    Every relation is homogeneous of degree k; reduction mod the ideal and
    orbit closure are the caller's.
    """
    # (i) in place
    for r in valid_r_values(g, n, k):
        base = fz_class(g, n, r)
        if base.is_zero():
            continue
        if r == k:
            yield "inplace", base
            continue
        for m in monomial_basis(n, k - r):
            yield "inplace", TautClass.from_monomial(g, m) * base
    # (ii) diagonal pushforwards
    for d in range(1, config.diagonal_depth + 1):
        n0 = n - d
        if n0 < 0:
            break
        for r in valid_r_values(g, n0, k - d):
            base = fz_class(g, n0, r)
            if base.is_zero():
                continue
            for dup_seq in itertools.product(*[range(1, n0 + t + 1)
                                               for t in range(d)]):
                tr = base
                for i in dup_seq:
                    tr = tr.diagonal_pushforward(i)
                rest = k - r - d
                if rest == 0:
                    yield f"diagonal-{d}", tr
                else:
                    for m in monomial_basis(n, rest):
                        yield f"diagonal-{d}", TautClass.from_monomial(g, m) * tr
    # (iii) forgetful pushforwards
    for j in range(1, config.forgetful_depth + 1):
        forgotten = list(range(n + 1, n + j + 1))
        for r in valid_r_values(g, n + j, k + j):
            if r > k + j:
                continue
            dm = k + j - r
            if dm > config.forgetful_monomial_cap:
                continue
            base = fz_class(g, n + j, r)
            if base.is_zero():
                continue
            for m in monomial_basis(n + j, dm):
                if not _touches(m, forgotten):
                    continue
                cls = TautClass.from_monomial(g, m) * base
                for _ in range(j):
                    cls = cls.forgetful_pushforward(cls.n)
                if not cls.is_zero():
                    yield f"forgetful-{j}", cls
