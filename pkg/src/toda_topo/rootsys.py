"""Root systems of finite simple type and fully enumerated Weyl groups.

Vertex numbering follows Bourbaki:

    A_l   1 - 2 - ... - l
    B_l   1 - 2 - ... - (l-1) => l        (alpha_l short)
    C_l   1 - 2 - ... - (l-1) <= l        (alpha_l long)
    D_l   1 - 2 - ... - (l-2) - (l-1), with l also joined to (l-2)
    E_l   1 - 3 - 4 - 5 - ... - l, with 2 joined to 4
    F_4   1 - 2 => 3 - 4                  (alpha_1, alpha_2 long)
    G_2   1 <= 2                          (alpha_1 short)

The Cartan matrix uses C[i][j] = alpha_i(h_j) = 2(alpha_i, alpha_j)/(alpha_j, alpha_j),
so that s_i(alpha_j) = alpha_j - C[j][i] alpha_i.  Roots are integer vectors in
the simple-root basis.  Internally vertices are 0-based; text forms are 1-based.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import RankCapExceeded, SizeCapExceeded, UnsupportedType

DEFAULT_RANK_CAP = 6
DEFAULT_SIZE_CAP = 10**6

Root = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]

_COXETER_ORDER = {0: 2, 1: 3, 2: 4, 3: 6}


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    cartan: Matrix
    positive_roots: Tuple[Root, ...]
    coxeter_orders: Matrix

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def roots(self) -> Tuple[Root, ...]:
        """Positive roots followed by their negatives, in the same order."""
        return self.positive_roots + tuple(tuple(-c for c in r) for r in self.positive_roots)

    def pairing(self, beta: Sequence[int], i: int) -> int:
        """<beta, alpha_i^vee> for beta given in the simple-root basis."""
        return sum(c * self.cartan[k][i] for k, c in enumerate(beta))

    def reflect(self, i: int, beta: Sequence[int]) -> Root:
        n = self.pairing(beta, i)
        out = list(beta)
        out[i] -= n
        return tuple(out)

    def simple_root(self, i: int) -> Root:
        return tuple(1 if k == i else 0 for k in range(self.rank))


def parse_type(text: str) -> Tuple[str, int]:
    """Split a label such as ``"A2"`` or ``"f4"`` into ``("A", 2)``."""
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?\s*(\d+)\s*", text)
    if not m:
        raise UnsupportedType(f"cannot parse type label {text!r}")
    return m.group(1).upper(), int(m.group(2))


def _diagram(type_label: str, l: int) -> Tuple[List[Fraction], Dict[Tuple[int, int], Fraction]]:
    """Squared lengths and off-diagonal inner products of the simple roots."""
    one, half = Fraction(1), Fraction(1, 2)
    lengths = [Fraction(2)] * l
    edges: Dict[Tuple[int, int], Fraction] = {}
    if type_label == "A" and l >= 1:
        for i in range(l - 1):
            edges[(i, i + 1)] = -one
    elif type_label == "B" and l >= 2:
        lengths[l - 1] = one
        for i in range(l - 1):
            edges[(i, i + 1)] = -one
    elif type_label == "C" and l >= 2:
        lengths = [one] * (l - 1) + [Fraction(2)]
        for i in range(l - 2):
            edges[(i, i + 1)] = -half
        edges[(l - 2, l - 1)] = -one
    elif type_label == "D" and l >= 3:
        for i in range(l - 2):
            edges[(i, i + 1)] = -one
        edges[(l - 3, l - 1)] = -one
    elif type_label == "E" and l in (6, 7, 8):
        edges[(0, 2)] = -one
        edges[(1, 3)] = -one
        for i in range(2, l - 1):
            edges[(i, i + 1)] = -one
    elif type_label == "F" and l == 4:
        lengths = [Fraction(2), Fraction(2), one, one]
        edges[(0, 1)] = -one
        edges[(1, 2)] = -one
        edges[(2, 3)] = -half
    elif type_label == "G" and l == 2:
        lengths = [Fraction(2), Fraction(6)]
        edges[(0, 1)] = Fraction(-3)
    else:
        raise UnsupportedType(f"{type_label}{l} is not a finite simple type")
    return lengths, edges


def cartan_matrix(type_label: str, rank: int) -> Matrix:
    lengths, edges = _diagram(type_label, rank)
    form = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        form[i][i] = lengths[i]
    for (i, j), v in edges.items():
        form[i][j] = form[j][i] = v
    rows = []
    for i in range(rank):
        row = []
        for j in range(rank):
            v = 2 * form[i][j] / form[j][j]
            assert v.denominator == 1
            row.append(int(v))
        rows.append(tuple(row))
    return tuple(rows)


def _positive_roots(cartan: Matrix) -> Tuple[Root, ...]:
    # Root strings, processed height by height: beta + alpha_i is a root
    # iff q = p - <beta, alpha_i^vee> > 0, p the downward string length.
    l = len(cartan)
    simple = [tuple(1 if k == i else 0 for k in range(l)) for i in range(l)]
    found = set(simple)
    ordered: List[Root] = list(simple)
    level = list(simple)
    while level:
        nxt: List[Root] = []
        for beta in level:
            for i in range(l):
                if beta == simple[i]:
                    continue
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in found:
                        p += 1
                    else:
                        break
                q = p - sum(c * cartan[k][i] for k, c in enumerate(beta))
                if q > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        nxt.sort()
        ordered.extend(nxt)
        level = nxt
    return tuple(ordered)


def build_root_system(type_label: str, rank: Optional[int] = None,
                      rank_cap: int = DEFAULT_RANK_CAP) -> RootSystem:
    """Build the root system for ``(type_label, rank)``, e.g. ``("G", 2)`` or ``"G2"``."""
    if rank is None:
        type_label, rank = parse_type(type_label)
    type_label = type_label.upper()
    if rank < 1:
        raise UnsupportedType(f"rank must be positive, got {rank}")
    _diagram(type_label, rank)
    if rank > rank_cap:
        raise RankCapExceeded(f"rank {rank} exceeds cap {rank_cap}")
    cartan = cartan_matrix(type_label, rank)
    coxeter = tuple(
        tuple(1 if i == j else _COXETER_ORDER[cartan[i][j] * cartan[j][i]] for j in range(rank))
        for i in range(rank)
    )
    return RootSystem(type_label, rank, cartan, _positive_roots(cartan), coxeter)


@dataclass(eq=False)
class WeylGroup:
    """Weyl group with every element enumerated.

    Element ``g`` is an integer index; index order is breadth-first discovery
    from the identity (index 0) by right multiplication with s_1, ..., s_l, so
    it is sorted by length and gives the canonical order used everywhere.
    ``perms[g][r]`` is the index of ``g(root r)`` in ``root_system.roots``.
    """

    root_system: RootSystem
    perms: List[Tuple[int, ...]]
    lengths: List[int]
    words: List[Tuple[int, ...]]
    right: List[Tuple[int, ...]]
    left: List[Tuple[int, ...]]
    index: Dict[Tuple[int, ...], int] = field(repr=False)
    _split_cache: Dict[Tuple[int, Tuple[int, ...]], Tuple[int, Tuple[int, ...]]] = field(
        default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def generators(self) -> List[int]:
        return [self.right[0][i] for i in range(self.rank)]

    def mul(self, g: int, h: int) -> int:
        pg, ph = self.perms[g], self.perms[h]
        return self.index[tuple(pg[r] for r in ph)]

    def inverse(self, g: int) -> int:
        p = self.perms[g]
        inv = [0] * len(p)
        for r, img in enumerate(p):
            inv[img] = r
        return self.index[tuple(inv)]

    def from_word(self, word: Iterable[int]) -> int:
        g = 0
        for i in word:
            g = self.right[g][i]
        return g

    def name(self, g: int) -> str:
        return "".join(f"s{i + 1}" for i in self.words[g]) or "e"

    def parse(self, text: str) -> int:
        """Inverse of :meth:`name`; accepts ``"e"``, ``"s1s2"``, ``"s1 s2"``, ``"1,2"``."""
        text = text.strip()
        if text in ("", "e", "id"):
            return 0
        letters = re.findall(r"\d+", text)
        word = [int(x) - 1 for x in letters]
        if any(not 0 <= i < self.rank for i in word):
            raise ValueError(f"generator index out of range in {text!r}")
        return self.from_word(word)

    def inversions(self, g: int) -> int:
        n = len(self.root_system.positive_roots)
        return sum(1 for r in self.perms[g][:n] if r >= n)

    def coset_split(self, w: int, S: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
        """Return ``(w_min, word)`` with ``w = w_min * s_word[-1] ... s_word[0]``.

        ``word`` lists the S-reflections in the order they act on a diagram,
        i.e. the W_S part is ``s_{word[-1]} ... s_{word[0]}``.
        """
        key = (w, tuple(S))
        hit = self._split_cache.get(key)
        if hit is not None:
            return hit
        letters: List[int] = []
        g = w
        moved = True
        while moved:
            moved = False
            for i in key[1]:
                h = self.right[g][i]
                if self.lengths[h] < self.lengths[g]:
                    letters.append(i)
                    g = h
                    moved = True
                    break
        out = (g, tuple(letters))
        self._split_cache[key] = out
        return out

    def decompose(self, w: int, S: Sequence[int]) -> Tuple[int, int]:
        """``(w_min, w_S)`` with ``w = w_min * w_S`` and lengths adding."""
        rep, letters = self.coset_split(w, S)
        return rep, self.from_word(reversed(letters))

    def is_minimal(self, w: int, S: Sequence[int]) -> bool:
        return all(self.lengths[self.right[w][i]] > self.lengths[w] for i in S)


def enumerate_weyl(rs: RootSystem, size_cap: int = DEFAULT_SIZE_CAP) -> WeylGroup:
    roots = rs.roots
    ridx = {r: k for k, r in enumerate(roots)}
    gens = [tuple(ridx[rs.reflect(i, r)] for r in roots) for i in range(rs.rank)]
    ident = tuple(range(len(roots)))
    perms = [ident]
    index = {ident: 0}
    lengths = [0]
    words: List[Tuple[int, ...]] = [()]
    right: List[List[int]] = []
    queue = deque([0])
    while queue:
        g = queue.popleft()
        pg = perms[g]
        row = []
        for i, s in enumerate(gens):
            h = tuple(pg[r] for r in s)
            k = index.get(h)
            if k is None:
                k = len(perms)
                if k >= size_cap:
                    raise SizeCapExceeded(f"|W| exceeds cap {size_cap}")
                index[h] = k
                perms.append(h)
                lengths.append(lengths[g] + 1)
                words.append(words[g] + (i,))
                queue.append(k)
            row.append(k)
        right.append(row)
    left = [tuple(index[tuple(s[r] for r in p)] for p in perms) for s in gens]
    return WeylGroup(rs, perms, lengths, words, [tuple(r) for r in right], left, index)


@dataclass(frozen=True)
class ParabolicCosets:
    S: Tuple[int, ...]
    subgroup: Tuple[int, ...]
    representatives: Tuple[int, ...]
    table: Dict[int, Tuple[int, int]]


def parabolic_subgroup(W: WeylGroup, S: Iterable[int]) -> Tuple[int, ...]:
    S = sorted(set(S))
    seen = {0}
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for i in S:
            h = W.right[g][i]
            if h not in seen:
                seen.add(h)
                queue.append(h)
    return tuple(sorted(seen))


def parabolic_cosets(W: WeylGroup, S: Iterable[int]) -> ParabolicCosets:
    S = tuple(sorted(set(S)))
    if any(not 0 <= i < W.rank for i in S):
        raise ValueError(f"subset {S} not contained in the simple roots")
    table = {w: W.decompose(w, S) for w in range(W.order)}
    reps = tuple(sorted({rep for rep, _ in table.values()}))
    return ParabolicCosets(S, parabolic_subgroup(W, S), reps, table)


def minimal_representatives(W: WeylGroup, S: Sequence[int]) -> List[int]:
    return [w for w in range(W.order) if W.is_minimal(w, S)]


def decompose(W: WeylGroup, S: Sequence[int], w: int) -> Tuple[int, int]:
    return W.decompose(w, tuple(sorted(S)))


def load(label: str, rank_cap: int = DEFAULT_RANK_CAP,
         size_cap: int = DEFAULT_SIZE_CAP) -> Tuple[RootSystem, WeylGroup]:
    """Convenience: ``load("A2")`` returns the root system and its Weyl group."""
    rs = build_root_system(label, rank_cap=rank_cap)
    return rs, enumerate_weyl(rs, size_cap=size_cap)


def info(rs: RootSystem, W: WeylGroup) -> dict:
    return {
        "type": rs.name,
        "rank": rs.rank,
        "cartan": [list(r) for r in rs.cartan],
        "coxeter_orders": [list(r) for r in rs.coxeter_orders],
        "positive_roots": len(rs.positive_roots),
        "weyl_order": W.order,
    }


def conjugacy_classes(W: WeylGroup) -> List[Tuple[int, ...]]:
    """Classes as sorted index tuples, ordered by their smallest element."""
    seen = [False] * W.order
    out = []
    for g in range(W.order):
        if seen[g]:
            continue
        cls = {g}
        seen[g] = True
        queue = deque([g])
        while queue:
            x = queue.popleft()
            for i in range(W.rank):
                y = W.left[i][W.right[x][i]]
                if not seen[y]:
                    seen[y] = True
                    cls.add(y)
                    queue.append(y)
        out.append(tuple(sorted(cls)))
    return out


_EXCEPTIONAL = {("E", 6): (36, 51840), ("E", 7): (63, 2903040), ("E", 8): (120, 696729600),
                ("F", 4): (24, 1152), ("G", 2): (6, 12)}


def classical_counts(type_label: str, l: int) -> Tuple[int, int]:
    """(number of positive roots, |W|) from the textbook formulas."""
    if (type_label, l) in _EXCEPTIONAL:
        return _EXCEPTIONAL[(type_label, l)]
    f = math.factorial(l)
    if type_label == "A":
        return l * (l + 1) // 2, math.factorial(l + 1)
    if type_label in "BC":
        return l * l, 2**l * f
    if type_label == "D":
        return l * (l - 1), 2 ** (l - 1) * f
    raise UnsupportedType(f"{type_label}{l}")


def self_test(rs: RootSystem, W: WeylGroup) -> Dict[str, bool]:
    """Root count, group order, Cartan symmetrizability and Coxeter relations in W."""
    n_pos, order = classical_counts(rs.type_label, rs.rank)
    l = rs.rank
    C = rs.cartan
    relations = all(
        W.from_word((i, j) * rs.coxeter_orders[i][j]) == 0
        for i in range(l) for j in range(l) if i != j) and all(
        W.from_word((i, i)) == 0 for i in range(l))
    lengths = all(W.lengths[g] == W.inversions(g) for g in range(W.order))
    return {
        "cartan_diagonal": all(C[i][i] == 2 for i in range(l)),
        "cartan_zero_pattern": all((C[i][j] == 0) == (C[j][i] == 0)
                                   for i in range(l) for j in range(l)),
        "positive_roots": len(rs.positive_roots) == n_pos,
        "weyl_order": W.order == order,
        "coxeter_relations": relations,
        "length_equals_inversions": lengths,
    }
