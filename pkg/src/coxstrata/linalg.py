"""Exact linear algebra over the integers and rationals.

Everything here is fraction-free or Fraction-based; no floating point.
Matrices are small (rows are root coordinate vectors), so clarity wins
over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

IntVec = tuple[int, ...]


def bareiss_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((i for i in range(rank, n_rows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for i in range(rank + 1, n_rows):
            fi = m[i][col]
            for c in range(col, n_cols):
                m[i][c] = (pv * m[i][c] - fi * m[rank][c]) // prev
        prev = pv
        rank += 1
        if rank == n_rows:
            break
    return rank


class IncrementalSpan:
    """Row space maintained in reduced echelon form over Fraction.

    Supports exact membership tests and greedy basis extraction.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def _reduce(self, vec: Sequence[int | Fraction]) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                for c in range(p, self.dim):
                    v[c] -= f * row[c]
        return v

    def contains(self, vec: Sequence[int | Fraction]) -> bool:
        return not any(self._reduce(vec))

    def add(self, vec: Sequence[int | Fraction]) -> bool:
        """Add vec to the span; return True iff it enlarged the span."""
        v = self._reduce(vec)
        p = next((c for c in range(self.dim) if v[c]), None)
        if p is None:
            return False
        f = v[p]
        v = [x / f for x in v]
        for row in self.rows:
            if row[p]:
                g = row[p]
                for c in range(p, self.dim):
                    row[c] -= g * v[c]
        self.rows.append(v)
        self.pivots.append(p)
        order = sorted(range(len(self.pivots)), key=self.pivots.__getitem__)
        self.rows = [self.rows[i] for i in order]
        self.pivots = [self.pivots[i] for i in order]
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def greedy_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[int]:
    """Indices of the first maximal independent subset, in input order."""
    span = IncrementalSpan(dim)
    return [i for i, v in enumerate(vectors) if span.add(v)]


def solve_in_basis(
    basis: Sequence[Sequence[int]], target: Sequence[int | Fraction]
) -> list[Fraction] | None:
    """Coefficients c with sum(c_i * basis_i) == target, or None.

    The basis rows must be linearly independent.
    """
    if not basis:
        return [] if not any(target) else None
    k, dim = len(basis), len(basis[0])
    # Solve B^T c = target by elimination on the augmented k+1 column system.
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(target[j])] for j in range(dim)]
    piv_rows: list[int] = []
    row = 0
    for col in range(k):
        piv = next((i for i in range(row, dim) if aug[i][col]), None)
        if piv is None:
            return None  # basis not independent; caller bug
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        for i in range(dim):
            if i != row and aug[i][col]:
                f = aug[i][col] / pv
                for c in range(col, k + 1):
                    aug[i][c] -= f * aug[row][c]
        piv_rows.append(row)
        row += 1
    for i in range(row, dim):
        if aug[i][k]:
            return None  # inconsistent: target outside the span
    return [aug[piv_rows[c]][k] / aug[piv_rows[c]][c] for c in range(k)]


def _primitive(vec: Sequence[Fraction]) -> IntVec:
    from math import lcm

    den = lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def integer_kernel(rows: Sequence[Sequence[int]], dim: int) -> list[IntVec]:
    """Primitive integer basis of {x : row . x == 0 for every row}.

    Returns dim - rank vectors; for an empty row list, the standard basis.
    """
    span = IncrementalSpan(dim)
    for r in rows:
        span.add(r)
    ref, pivots = span.rows, span.pivots
    free = [c for c in range(dim) if c not in pivots]
    kernel: list[IntVec] = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        # Echelon rows are reduced, so each pivot coordinate solves directly.
        for row, p in zip(ref, pivots):
            v[p] = -row[f]
        kernel.append(_primitive(v))
    return kernel
