"""Exact sparse integer matrices and Smith normal form invariant factors.

Elimination runs in two phases.  Unit pivots are removed first, choosing
the entry of smallest Markowitz cost among the shortest rows; each such
pivot contributes an invariant factor 1 and deletes its row and column.
When no unit is left but every remaining entry shares a factor g, the
factor is divided out (SNF(gM) = g SNF(M)) and unit elimination resumes.
Whatever is left after that goes through a dense Smith reduction on Python
integers.
"""

from __future__ import annotations

import heapq
from math import gcd
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple


@dataclass
class IntMatrix:
    """Column-sparse integer matrix; ``cols[j]`` maps row index to value."""

    nrows: int
    ncols: int
    cols: List[Dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.cols:
            self.cols = [{} for _ in range(self.ncols)]

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v:
                    m.cols[j][i] = int(v)
        return m

    def to_dense(self) -> List[List[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                out[i][j] = v
        return out

    def triplets(self) -> Iterator[Tuple[int, int, int]]:
        """Nonzero entries as (row, col, value), ordered by row then column."""
        trip = [(i, j, v) for j, col in enumerate(self.cols) for i, v in col.items()]
        return iter(sorted(trip))

    def to_triplet_text(self) -> str:
        return "".join(f"{i} {j} {v}\n" for i, j, v in self.triplets())

    @classmethod
    def from_triplet_text(cls, text: str, nrows: int, ncols: int) -> "IntMatrix":
        m = cls(nrows, ncols)
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j, v = (int(x) for x in line.split())
            if v:
                m.cols[j][i] = v
        return m

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = IntMatrix(self.nrows, other.ncols)
        for j, col in enumerate(other.cols):
            acc: Dict[int, int] = {}
            for k, v in col.items():
                for i, u in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + u * v
            out.cols[j] = {i: v for i, v in acc.items() if v}
        return out

    def apply(self, vec: Dict[int, int]) -> Dict[int, int]:
        acc: Dict[int, int] = {}
        for k, v in vec.items():
            for i, u in self.cols[k].items():
                acc[i] = acc.get(i, 0) + u * v
        return {i: v for i, v in acc.items() if v}


def _rows_of(M) -> Tuple[int, int, List[Dict[int, int]]]:
    if isinstance(M, IntMatrix):
        rows: List[Dict[int, int]] = [{} for _ in range(M.nrows)]
        for j, col in enumerate(M.cols):
            for i, v in col.items():
                if v:
                    rows[i][j] = v
        return M.nrows, M.ncols, rows
    M = [list(r) for r in M]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    return nrows, ncols, [{j: int(v) for j, v in enumerate(r) if v} for r in M]


def _eliminate_units(rows: List[Dict[int, int]]) -> int:
    """Remove unit pivots in place; returns how many were removed."""
    colsets: Dict[int, set] = {}
    for i, r in enumerate(rows):
        for j in r:
            colsets.setdefault(j, set()).add(i)
    heap = [(len(r), i) for i, r in enumerate(rows) if r]
    heapq.heapify(heap)
    alive = [bool(r) for r in rows]
    units = 0
    while heap:
        n, p = heapq.heappop(heap)
        if not alive[p] or n != len(rows[p]):
            continue
        prow = rows[p]
        best, cost = None, None
        for j, v in prow.items():
            if v in (1, -1):
                c = len(colsets[j])
                if cost is None or c < cost:
                    best, cost = j, c
        if best is None:
            continue
        pv = prow[best]
        alive[p] = False
        for j in prow:
            colsets[j].discard(p)
        for r in list(colsets.pop(best)):
            row = rows[r]
            f = row[best] * pv
            for j, v in prow.items():
                nv = row.get(j, 0) - f * v
                if nv:
                    if j not in row:
                        colsets[j].add(r)
                    row[j] = nv
                else:
                    if j in row:
                        del row[j]
                        if j != best:
                            colsets[j].discard(r)
            if row:
                heapq.heappush(heap, (len(row), r))
            else:
                alive[r] = False
        rows[p] = {}
        units += 1
    for i in range(len(rows)):
        if not alive[i]:
            rows[i] = {}
    return units


def dense_smith_diagonal(A: List[List[int]]) -> List[int]:
    """Nonzero invariant factors of a dense integer matrix (modified in place)."""
    m = len(A)
    n = len(A[0]) if m else 0
    diag: List[int] = []
    t = 0
    while t < min(m, n):
        # smallest nonzero |entry| in the trailing block
        piv = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (piv is None or abs(v) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
                    if abs(v) == 1:
                        break
            if piv and abs(A[piv[0]][piv[1]]) == 1:
                break
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    ri, rt = A[i], A[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A[t:]:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # enforce divisibility with the rest of the block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = A[t], A[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest entry of row/column t into the pivot
            best, where = abs(p), None
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best:
                    best, where = abs(A[i][t]), ("r", i)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best:
                    best, where = abs(A[t][j]), ("c", j)
            if where is not None:
                kind, k = where
                if kind == "r":
                    A[t], A[k] = A[k], A[t]
                else:
                    for row in A:
                        row[t], row[k] = row[k], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def smith_normal_form(M) -> Tuple[List[int], int]:
    """Invariant factors d_1 | d_2 | ... (nonzero ones) and the rank of ``M``.

    ``M`` is an :class:`IntMatrix` or a dense list of rows.
    """
    nrows, ncols, rows = _rows_of(M)
    factors: List[int] = []
    scale = 1
    while True:
        factors += [scale] * _eliminate_units(rows)
        rows = [r for r in rows if r]
        g = 0
        for r in rows:
            for v in r.values():
                g = gcd(g, v)
                if g == 1:
                    break
            if g == 1:
                break
        if g <= 1:
            break
        # SNF(g M) = g SNF(M): divide out the content and look for units again
        rows = [{j: v // g for j, v in r.items()} for r in rows]
        scale *= g
    live_cols = sorted({j for r in rows for j in r})
    cpos = {j: k for k, j in enumerate(live_cols)}
    dense = [[0] * len(live_cols) for _ in rows]
    for i, r in enumerate(rows):
        for j, v in r.items():
            dense[i][cpos[j]] = v
    rest = dense_smith_diagonal(dense) if dense else []
    factors = sorted(factors + [scale * x for x in rest])
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0, "invariant factors must form a divisibility chain"
    return factors, len(factors)


def rank(M) -> int:
    return smith_normal_form(M)[1]
