"""Exact rational linear algebra on small dense matrices (lists of rows)."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Vector = List[Fraction]


def rref(rows: Sequence[Sequence]) -> Tuple[List[Vector], List[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [[Fraction(x) for x in r] for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    pivots: List[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def identity(n: int) -> List[Vector]:
    return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]


def kernel(rows: Sequence[Sequence]) -> List[Vector]:
    """Basis of {x : A x = 0}."""
    n = len(rows[0]) if rows else 0
    R, pivots = rref(rows)
    free = [c for c in range(n) if c not in set(pivots)]
    out = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def column_basis(rows: Sequence[Sequence]) -> List[Vector]:
    """Independent columns of A spanning its column space."""
    if not rows:
        return []
    _, pivots = rref(rows)
    return [[Fraction(r[c]) for r in rows] for c in pivots]


def extend_basis(sub: List[Vector], span: List[Vector], n: int) -> Tuple[List[Vector], int]:
    """Extend a basis ``sub`` by vectors of ``span``; returns (basis, len(sub))."""
    vecs = list(sub) + list(span)
    if not vecs:
        return [], 0
    cols = [[v[i] for v in vecs] for i in range(n)]
    _, pivots = rref(cols)
    basis = [vecs[p] for p in pivots]
    n_sub = sum(1 for p in pivots if p < len(sub))
    if n_sub != len(sub):
        raise ValueError("subspace vectors are not independent")
    return basis, n_sub


class Coordinates:
    """Solve v = sum_t c_t basis[t] for v in the span of ``basis``."""

    def __init__(self, basis: List[Vector]):
        self.k = len(basis)
        n = len(basis[0]) if basis else 0
        cols = [[basis[t][i] for t in range(self.k)] for i in range(n)]
        # independent rows of the n x k matrix give an invertible k x k block
        _, self.rows = rref(basis) if basis else ([], [])
        square = [cols[i] for i in self.rows]
        aug = [list(square[r]) + [Fraction(int(r == c)) for c in range(self.k)]
               for r in range(self.k)]
        R, _ = rref(aug)
        self.inv = [row[self.k:] for row in R]

    def solve(self, v: Sequence) -> Vector:
        sub = [Fraction(v[i]) for i in self.rows]
        return [sum((a * b for a, b in zip(row, sub)), Fraction(0)) for row in self.inv]
