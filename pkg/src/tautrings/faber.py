"""Socle evaluation against lambda_g lambda_{g-1}.

The n-point evaluation of psi monomials on the pointed moduli spaces

    <psi^{a_1} ... psi^{a_n}> = (2g+n-3)! (2g-1)!! / ((2g-1)! prod (2a_i-1)!!)

(all a_i >= 1, sum a_i = g-2+n, in units of the one-point value) is the
proven Faber intersection-number formula; kappa monomials are converted by
the standard partition transform with (-1)^(m-|P|) (|B|-1)! weights.  This
functional is the engine's independent certificate that harvested relation
candidates really pair to zero into the socle.

Values are normalized so <kappa_1^{g-2}> is whatever the formula gives; the
engine's user-facing functional renormalizes ev(kappa_1^{g-2}) = 1.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Dict, Tuple

from . import tautalg
from .errors import DimensionMismatch
from .rationals import QQ
from .tautalg import TautClass


def double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    out = 1
    while k > 0:
        out *= k
        k -= 2
    return out


@lru_cache(maxsize=None)
def psi_integral(g: int, exps: Tuple[int, ...]):
    """Normalized <prod psi_i^{a_i} . lambda_g lambda_{g-1}>, a_i >= 1."""
    n = len(exps)
    if n == 0:
        return QQ(1) if g == 2 else QQ(0)
    if any(a < 1 for a in exps) or sum(exps) != g - 2 + n:
        raise DimensionMismatch(f"bad socle exponents {exps} at g={g}")
    num = factorial(2 * g + n - 3) * double_factorial(2 * g - 1)
    den = factorial(2 * g - 1)
    for a in exps:
        den *= double_factorial(2 * a - 1)
    return QQ(num, den)


@lru_cache(maxsize=None)
def kappa_monomial_value(g: int, kappas: Tuple[int, ...]):
    """<prod kappa_{b_i} . lambda lambda> via the partition transform."""
    m = len(kappas)
    if m == 0:
        return QQ(1) if g == 2 else QQ(0)
    if sum(kappas) != g - 2:
        return QQ(0)
    total = QQ(0)
    for part in tautalg._set_partitions(m):
        coef = QQ(1)
        exps = []
        for block in part:
            coef *= factorial(len(block) - 1)
            exps.append(sum(kappas[i - 1] for i in block) + 1)
        sign = -1 if (m - len(part)) % 2 else 1
        total += sign * coef * psi_integral(g, tuple(sorted(exps)))
    return total


def socle_value(g: int, cls: TautClass):
    """Evaluate a degree-(g-2+n) class: push to the base, then transform."""
    if cls.is_zero():
        return QQ(0)
    if cls.degree != g - 2 + cls.n:
        raise DimensionMismatch(
            f"class degree {cls.degree} is not socle degree {g-2+cls.n}")
    base = cls.push_to_base()
    total = QQ(0)
    for (blocks, kappas), c in base.terms.items():
        total += c * kappa_monomial_value(g, kappas)
    return total


def socle_pair(a: TautClass, b: TautClass):
    """<a, b>: multiply, push down, evaluate (unnormalized units)."""
    if a.g != b.g or a.n != b.n:
        raise DimensionMismatch("mismatched spaces in socle pairing")
    return socle_value(a.g, a * b)


def kappa1_power_value(g: int):
    return kappa_monomial_value(g, (1,) * (g - 2))
