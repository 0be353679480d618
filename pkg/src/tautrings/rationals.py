"""Exact rational scalars.

gmpy2.mpq is used when available (much faster bignum arithmetic than the
stdlib); fractions.Fraction is a drop-in fallback.  Both are kept in lowest
terms with positive denominator, so either satisfies the Rational contract.
Set TAUTRINGS_FRACTION=1 to force the stdlib type.
"""

from __future__ import annotations

import os
from fractions import Fraction

_mpq = None
if not os.environ.get("TAUTRINGS_FRACTION"):
    try:
        from gmpy2 import mpq as _mpq
    except ImportError:
        _mpq = None

QQ = _mpq if _mpq is not None else Fraction
SCALAR_BACKEND = "gmpy2" if _mpq is not None else "fractions"

ZERO = QQ(0)
ONE = QQ(1)


def qq(num, den=1):
    """Exact rational num/den."""
    return QQ(num, den)


def bit_size(x) -> int:
    """Bit length of numerator times denominator; pivot-size heuristic."""
    return int(x.numerator).bit_length() + int(x.denominator).bit_length()


def as_str(x) -> str:
    """Serialize as "p" or "p/q" (lowest terms, q > 0)."""
    return str(x)


def from_str(s: str):
    if "/" in s:
        p, q = s.split("/")
        return QQ(int(p), int(q))
    return QQ(int(s))
