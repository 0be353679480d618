"""Exact rational linear algebra: sparse/dense matrices over Q.

All arithmetic is exact (bignum rationals); there is no floating point
anywhere in the package.  Matrices are immutable after construction.  The
reduction kernel is the compiled extension when built, with a pure-Python
fallback (see tautrings._impl); rank_bareiss is an independent fraction-free
strategy used to cross-check the pivoted elimination.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .._impl import BACKEND, Echelon, row_reduce
from ..errors import DimensionMismatch
from ..rationals import QQ, ZERO, qq

__all__ = [
    "BACKEND",
    "Echelon",
    "QMatrix",
    "QQ",
    "qq",
    "rank_bareiss",
]

DENSE_CUTOFF = 64  # below this size dense elimination is used


class QMatrix:
    """Sparse exact-rational matrix; no zero entries are stored."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int,
                 entries: Dict[Tuple[int, int], object]):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in entries.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise DimensionMismatch(f"entry ({r},{c}) out of bounds")
            v = QQ(v)
            if v:
                clean[(r, c)] = v
        self.entries = clean

    @classmethod
    def from_rows(cls, rows: Sequence[Dict[int, object]], cols: int) -> "QMatrix":
        entries = {}
        for r, row in enumerate(rows):
            for c, v in row.items():
                entries[(r, c)] = v
        return cls(len(rows), cols, entries)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "QMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        entries = {}
        for r, row in enumerate(data):
            if len(row) != cols:
                raise DimensionMismatch("ragged dense input")
            for c, v in enumerate(row):
                entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def row_dicts(self) -> List[Dict[int, object]]:
        out: List[Dict[int, object]] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def to_dense(self) -> List[List[object]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       {(c, r): v for (r, c), v in self.entries.items()})

    def __eq__(self, other) -> bool:
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __repr__(self) -> str:
        return f"QMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    # -- elimination-backed queries

    def _small(self) -> bool:
        return self.rows < DENSE_CUTOFF and self.cols < DENSE_CUTOFF

    def rref(self) -> Tuple[List[int], List[Dict[int, object]]]:
        if self._small():
            return _rref_dense(self.to_dense(), self.cols, reduced=True)
        return row_reduce(self.row_dicts(), self.cols, reduced=True)

    def rank(self) -> int:
        if self._small():
            pivots, _ = _rref_dense(self.to_dense(), self.cols, reduced=False)
        else:
            pivots, _ = row_reduce(self.row_dicts(), self.cols, reduced=False)
        return len(pivots)

    def nullspace_basis(self) -> List[Tuple[object, ...]]:
        """Basis of the right kernel, in reduced echelon form.

        One vector per free column f: entry 1 at f and -RREF coefficient at
        each pivot column.
        """
        pivots, prows = self.rref()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            vec = [ZERO] * self.cols
            vec[f] = QQ(1)
            for p, row in zip(pivots, prows):
                coef = row.get(f)
                if coef:
                    vec[p] = -coef
            basis.append(tuple(vec))
        return basis

    def solve_or_membership(self, v: Sequence[object]) -> Optional[Tuple[object, ...]]:
        """Coefficients x with (columns of self) . x = v, or None.

        Tests membership of v in the column span; free coefficients are 0.
        """
        if len(v) != self.rows:
            raise DimensionMismatch(
                f"vector length {len(v)} != row count {self.rows}")
        aug = self.row_dicts()
        for r, val in enumerate(v):
            val = QQ(val)
            if val:
                aug[r][self.cols] = val
        pivots, prows = row_reduce(aug, self.cols + 1, reduced=True)
        if self.cols in pivots:
            return None
        x = [ZERO] * self.cols
        for p, row in zip(pivots, prows):
            x[p] = row.get(self.cols, ZERO)
        return tuple(x)


def _rref_dense(dense: List[List[object]], cols: int, reduced: bool):
    """Dense Gaussian elimination for small matrices; same output as rref."""
    rows = [list(r) for r in dense]
    pivots: List[int] = []
    prows: List[List[object]] = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = QQ(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(r + 1, len(rows)):
            coef = rows[i][c]
            if coef:
                rows[i] = [a - coef * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    if reduced:
        for i in range(len(pivots) - 1, 0, -1):
            c = pivots[i]
            for j in range(i):
                coef = rows[j][c]
                if coef:
                    rows[j] = [a - coef * b for a, b in zip(rows[j], rows[i])]
    out = []
    for i in range(len(pivots)):
        out.append({c: v for c, v in enumerate(rows[i]) if v})
    return pivots, out


def rank_bareiss(m: QMatrix) -> int:
    """Rank by fraction-free Bareiss elimination over the integers.

    Independent of the pivoted rational kernel; used as a cross-check and
    never as the only source of truth.
    """
    dense = m.to_dense()
    work: List[List[int]] = []
    for row in dense:
        lcm = 1
        for v in row:
            d = int(v.denominator)
            if d != 1:
                g = _gcd(lcm, d)
                lcm = lcm // g * d
        work.append([int(v.numerator) * (lcm // int(v.denominator))
                     for v in row])
    nr, nc = m.rows, m.cols
    rank = 0
    prev = 1
    r = 0
    for c in range(nc):
        piv = None
        for i in range(r, nr):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                work[i][j] = (work[r][c] * work[i][j]
                              - work[i][c] * work[r][j]) // prev
            work[i][c] = 0
        prev = work[r][c]
        r += 1
        rank += 1
        if r == nr:
            break
    return rank


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a
