"""Partition and symmetric-group combinatorics.

Partitions are non-increasing tuples of positive ints.  Permutations of
{1..n} are stored as 0-based one-line tuples p with p[i] = image of i+1,
minus 1.  Permutations act on positions (left action); composition is
"apply the right factor first": (s*t)(x) = s(t(x)).
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import DimensionMismatch, NotARepresentation
from .rationals import QQ

Partition = Tuple[int, ...]
Perm = Tuple[int, ...]


# ---------------------------------------------------------------------------
# partitions


def check_partition(lam: Sequence[int]) -> Partition:
    lam = tuple(int(x) for x in lam if x)
    if any(a < b for a, b in zip(lam, lam[1:])) or any(x < 0 for x in lam):
        raise ValueError(f"not a partition: {lam}")
    return lam


def weight(lam: Partition) -> int:
    return sum(lam)


def conjugate(lam: Partition) -> Partition:
    """Reflect the Young diagram across the diagonal."""
    lam = check_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0]))


@lru_cache(maxsize=None)
def partitions(n: int) -> Tuple[Partition, ...]:
    """All partitions of n, in reverse-lex order starting with (n)."""
    if n == 0:
        return ((),)
    out: List[Partition] = []

    def rec(rem: int, mx: int, acc: Tuple[int, ...]):
        if rem == 0:
            out.append(acc)
            return
        for part in range(min(rem, mx), 0, -1):
            rec(rem - part, part, acc + (part,))

    rec(n, n, ())
    return tuple(out)


def row_tableau_contents(lam: Partition) -> Tuple[int, ...]:
    """Contents c_k for the row tableau filling 1..n row by row.

    The box in row i, column j has content j - i (0-based equivalent).
    """
    out = []
    for i, row in enumerate(lam):
        for j in range(row):
            out.append(j - i)
    return tuple(out)


def content_row_tableau(lam: Partition, k: int) -> int:
    lam = check_partition(lam)
    contents = row_tableau_contents(lam)
    if not 1 <= k <= len(contents):
        raise DimensionMismatch(f"k={k} out of range for |lambda|={len(contents)}")
    return contents[k - 1]


def hook_dim(lam: Partition) -> int:
    """Dimension of the S_n irreducible via the hook length formula."""
    lam = check_partition(lam)
    n = weight(lam)
    if n == 0:
        return 1
    conj = conjugate(lam)
    denom = 1
    for i, row in enumerate(lam):
        for j in range(row):
            denom *= row - j + conj[j] - i - 1
    return factorial(n) // denom


def cycle_type_class_size(rho: Partition) -> int:
    """Size of the conjugacy class with cycle type rho in S_{|rho|}."""
    n = weight(rho)
    cent = 1
    for length, mult in _multiplicities(rho).items():
        cent *= length ** mult * factorial(mult)
    return factorial(n) // cent


def _multiplicities(rho: Partition) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for part in rho:
        out[part] = out.get(part, 0) + 1
    return out


@lru_cache(maxsize=None)
def character(lam: Partition, rho: Partition) -> int:
    """Irreducible character chi_lambda on the class of cycle type rho.

    Murnaghan-Nakayama recursion over border strips.
    """
    lam = check_partition(lam)
    rho = check_partition(rho)
    if weight(lam) != weight(rho):
        raise DimensionMismatch("weight mismatch between shape and cycle type")
    return _mn(lam, rho)


@lru_cache(maxsize=None)
def _mn(lam: Partition, rho: Partition) -> int:
    # Beta-set form: removing a k-strip moves one beta number down by k; the
    # sign is (-1)^(number of beta numbers jumped over).
    if not lam:
        return 1
    k = rho[0]
    rest = rho[1:]
    m = len(lam)
    beta = tuple(sorted(lam[i] + (m - 1 - i) for i in range(m)))
    beta_set = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in beta_set:
            continue
        crossed = sum(1 for c in beta if nb < c < b)
        new_beta = sorted(beta_set - {b} | {nb}, reverse=True)
        new_lam = tuple(v - (m - 1 - i) for i, v in enumerate(new_beta))
        new_lam = tuple(x for x in new_lam if x)
        contrib = _mn(new_lam, rest)
        total += -contrib if crossed & 1 else contrib
    return total


class CharacterTableRow:
    """chi_lambda on all classes of S_n, keyed by cycle type."""

    def __init__(self, shape: Partition):
        self.shape = check_partition(shape)
        n = weight(self.shape)
        self.values = {rho: character(self.shape, rho) for rho in partitions(n)}
        assert self.values[(1,) * n if n else ()] == hook_dim(self.shape)


# ---------------------------------------------------------------------------
# permutations


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(s: Perm, t: Perm) -> Perm:
    """(s*t)(x) = s(t(x)): apply t first."""
    return tuple(s[t[i]] for i in range(len(s)))


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, v in enumerate(s):
        out[v] = i
    return tuple(out)


def perm_sign(s: Perm) -> int:
    seen = [False] * len(s)
    sign = 1
    for i in range(len(s)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = s[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def cycle_type(s: Perm) -> Partition:
    seen = [False] * len(s)
    parts = []
    for i in range(len(s)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = s[j]
            length += 1
        parts.append(length)
    parts.sort(reverse=True)
    return tuple(parts)


def transposition(n: int, a: int, b: int) -> Perm:
    """Transposition (a b) in S_n, 1-based points."""
    out = list(range(n))
    out[a - 1], out[b - 1] = out[b - 1], out[a - 1]
    return tuple(out)


def class_representative(rho: Partition) -> Perm:
    """A permutation with cycle type rho (consecutive cycles)."""
    n = weight(rho)
    out = list(range(n))
    pos = 0
    for part in rho:
        for i in range(part):
            out[pos + i] = pos + (i + 1) % part
        pos += part
    return tuple(out)


def adjacent_factorization(s: Perm) -> List[int]:
    """Write s as a product of adjacent transpositions s_i = (i i+1).

    Returns indices i (1-based) such that s = s_{i_1} * s_{i_2} * ... with
    the rightmost factor applied first.
    """
    s = list(s)
    n = len(s)
    word: List[int] = []
    # selection sort by adjacent swaps applied on the left
    for target in range(n):
        pos = s.index(target)
        while pos > target:
            s[pos - 1], s[pos] = s[pos], s[pos - 1]
            word.append(pos)  # 1-based index of s_{pos}
            pos -= 1
    word.reverse()
    return word


def all_perms(n: int) -> Iterable[Perm]:
    return itertools.permutations(range(n))


# ---------------------------------------------------------------------------
# group algebra


class GroupAlgebraElement:
    """Finitely supported Q-linear combination of permutations of {1..n}."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Dict[Perm, object]):
        self.n = n
        self.terms = {p: QQ(c) for p, c in terms.items() if c}

    @classmethod
    def unit(cls, n: int) -> "GroupAlgebraElement":
        return cls(n, {identity_perm(n): QQ(1)})

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.n != other.n:
            raise DimensionMismatch("arity mismatch in group algebra")
        terms = dict(self.terms)
        for p, c in other.terms.items():
            nv = terms.get(p, QQ(0)) + c
            if nv:
                terms[p] = nv
            else:
                terms.pop(p, None)
        return GroupAlgebraElement(self.n, terms)

    def scale(self, c) -> "GroupAlgebraElement":
        c = QQ(c)
        return GroupAlgebraElement(self.n, {p: v * c for p, v in self.terms.items()})

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        if self.n != other.n:
            raise DimensionMismatch("arity mismatch in group algebra")
        acc: Dict[Perm, object] = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                r = compose(p, q)
                nv = acc.get(r, QQ(0)) + a * b
                if nv:
                    acc[r] = nv
                else:
                    acc.pop(r, None)
        return GroupAlgebraElement(self.n, acc)

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupAlgebraElement)
                and self.n == other.n and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"GroupAlgebraElement(n={self.n}, {len(self.terms)} terms)"


def _row_tableau_rows(lam: Partition) -> List[List[int]]:
    rows = []
    k = 1
    for part in lam:
        rows.append(list(range(k, k + part)))
        k += part
    return rows


def _subgroup_perms(n: int, cells: List[List[int]]) -> List[Perm]:
    """All permutations of {1..n} preserving each cell pointwise-freely."""
    perms = [identity_perm(n)]
    for cell in cells:
        new = []
        for assign in itertools.permutations(cell):
            p = list(range(n))
            for src, dst in zip(cell, assign):
                p[src - 1] = dst - 1
            new.append(tuple(p))
        perms = [compose(a, b) for a in perms for b in new]
    return perms


def tableau_symmetrizer(rows_cells: Tuple[Tuple[int, ...], ...], n: int,
                        order: str = "ab") -> GroupAlgebraElement:
    """Normalized Young symmetrizer for an explicit tableau.

    rows_cells lists the tableau's rows (cell labels).  order "ab" is row
    symmetrizer then column antisymmetrizer, "ba" the reverse; both squares
    recover themselves after the dim/n! normalization.
    """
    rows = [list(r) for r in rows_cells]
    width = max((len(r) for r in rows), default=0)
    cols = [[r[j] for r in rows if len(r) > j] for j in range(width)]
    shape = check_partition(tuple(len(r) for r in rows))
    scale = QQ(hook_dim(shape), factorial(n))
    a = GroupAlgebraElement(n, {p: QQ(1) for p in _subgroup_perms(n, rows)})
    b = GroupAlgebraElement(n, {q: QQ(perm_sign(q))
                                for q in _subgroup_perms(n, cols)})
    prod = a * b if order == "ab" else b * a
    return prod.scale(scale)


@lru_cache(maxsize=None)
def _young_cached(lam: Partition) -> GroupAlgebraElement:
    rows = tuple(tuple(r) for r in _row_tableau_rows(lam))
    return tableau_symmetrizer(rows, weight(lam), "ab")


def young_symmetrizer(lam: Partition) -> GroupAlgebraElement:
    """Normalized idempotent c_lambda = (dim/n!) a_lambda b_lambda for the
    row tableau of lambda."""
    lam = check_partition(lam)
    return _young_cached(lam)


# ---------------------------------------------------------------------------
# isotypic projection of explicit representations


def isotypic_multiplicity(action: Sequence, lam: Partition) -> int:
    """Multiplicity of sigma_lambda in a representation of S_n.

    `action` gives, for each adjacent transposition s_1..s_{n-1}, its matrix
    as a QMatrix (or dense rows).  The generator relations are checked; the
    multiplicity is the averaged character inner product and must come out a
    nonnegative integer.
    """
    lam = check_partition(lam)
    n = weight(lam)
    mats = [_as_dense(a) for a in action]
    if len(mats) != max(n - 1, 0):
        raise DimensionMismatch(f"need {n-1} generator matrices, got {len(mats)}")
    dim = len(mats[0]) if mats else 1
    for m in mats:
        if len(m) != dim or any(len(row) != dim for row in m):
            raise DimensionMismatch("generator matrices must be square, equal size")
    ident = [[QQ(1) if i == j else QQ(0) for j in range(dim)] for i in range(dim)]
    for i, m in enumerate(mats):
        if _mat_mul(m, m) != ident:
            raise NotARepresentation(f"s_{i+1}^2 != identity")
    for i in range(len(mats) - 1):
        a, b = mats[i], mats[i + 1]
        if _mat_mul(_mat_mul(a, b), a) != _mat_mul(_mat_mul(b, a), b):
            raise NotARepresentation(f"braid relation fails at s_{i+1}")
    for i in range(len(mats)):
        for j in range(i + 2, len(mats)):
            if _mat_mul(mats[i], mats[j]) != _mat_mul(mats[j], mats[i]):
                raise NotARepresentation(f"s_{i+1} and s_{j+1} do not commute")
    total = QQ(0)
    for rho in partitions(n):
        rep = class_representative(rho)
        word = adjacent_factorization(rep)
        m = ident
        for idx in word:
            m = _mat_mul(m, mats[idx - 1])
        tr = sum((m[i][i] for i in range(dim)), QQ(0))
        total += QQ(cycle_type_class_size(rho)) * QQ(character(lam, rho)) * tr
    total = total / QQ(factorial(n))
    if total.denominator != 1 or total < 0:
        raise NotARepresentation(f"multiplicity {total} is not a nonnegative integer")
    return int(total)


def _as_dense(a):
    if hasattr(a, "to_dense"):
        return a.to_dense()
    return [[QQ(v) for v in row] for row in a]


def _mat_mul(a, b):
    n = len(a)
    k = len(b[0]) if b else 0
    out = [[QQ(0)] * k for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for j, v in enumerate(ai):
            if v:
                bj = b[j]
                for c in range(k):
                    if bj[c]:
                        oi[c] += v * bj[c]
    return out


def character_inner_product(lam: Partition, mu: Partition) -> object:
    """(1/n!) sum over classes |class| chi_lam chi_mu; equals delta_{lam,mu}."""
    n = weight(lam)
    total = QQ(0)
    for rho in partitions(n):
        total += (QQ(cycle_type_class_size(rho))
                  * QQ(character(lam, rho)) * QQ(character(mu, rho)))
    return total / QQ(factorial(n))
