"""The cellular chain complex of the compactified Cartan manifold.

Cells are pairs (colored diagram D, minimal coset representative w) with
dimension l - |S(D)|.  The boundary of (D, w) sums, over the 2m ways of
coloring one more vertex, sign * (D', w) pushed into the parabolic quotient
of the enlarged colored set: w = v * u with u in W_{S'}, and u acts on
(D', +1) through the oriented action, which may flip the coefficient.
Every basis cell carries orientation +1; signs live in the coefficients.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import qlinalg
from .diagram import act_word, boundary_pieces, colorings
from .errors import ComplexInconsistent
from .rootsys import RootSystem, WeylGroup, conjugacy_classes, minimal_representatives
from .snf import IntMatrix, smith_normal_form


@dataclass(frozen=True, order=True)
class Cell:
    diagram: str
    coset: int

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.diagram) if c in "RB")

    @property
    def dimension(self) -> int:
        return sum(1 for c in self.diagram if c == "u")

    def label(self, W: WeylGroup) -> str:
        return f"({self.diagram},{W.name(self.coset)})"


@dataclass
class Chain:
    dimension: int
    coeffs: Dict[Cell, int]

    def __post_init__(self):
        self.coeffs = {c: v for c, v in self.coeffs.items() if v}
        if any(c.dimension != self.dimension for c in self.coeffs):
            raise ValueError("all cells of a chain must share its dimension")

    def __add__(self, other: "Chain") -> "Chain":
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            out[c] = out.get(c, 0) + v
        return Chain(self.dimension, out)

    def __neg__(self) -> "Chain":
        return Chain(self.dimension, {c: -v for c, v in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scale(self, k: int) -> "Chain":
        return Chain(self.dimension, {c: k * v for c, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class HomologyGroup:
    degree: int
    betti: int
    torsion: Tuple[int, ...]

    def __str__(self) -> str:
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def _push(rs: RootSystem, W: WeylGroup, w: int, labels: str) -> Tuple[Cell, int]:
    """Normalize the pair (w, labels) to a basis cell and an orientation sign."""
    S = tuple(i for i, c in enumerate(labels) if c in "RB")
    rep, word = W.coset_split(w, S)
    labels, o = act_word(rs, word, labels, 1)
    return Cell(labels, rep), o


class ChainComplex:
    """Graded cell bases and sparse boundary matrices ``boundary[d]: M_d -> M_{d-1}``."""

    def __init__(self, rs: RootSystem, W: WeylGroup):
        self.rs = rs
        self.W = W
        l = rs.rank
        self.bases: List[List[Cell]] = [[] for _ in range(l + 1)]
        for k in range(l + 1):
            for S in combinations(range(l), k):
                reps = minimal_representatives(W, S)
                for w in reps:
                    for labels in colorings(l, S):
                        self.bases[l - k].append(Cell(labels, w))
        self.index: List[Dict[Cell, int]] = [
            {c: n for n, c in enumerate(b)} for b in self.bases]
        self.boundary: Dict[int, IntMatrix] = {}
        for d in range(1, l + 1):
            mat = IntMatrix(len(self.bases[d - 1]), len(self.bases[d]))
            target = self.index[d - 1]
            for n, cell in enumerate(self.bases[d]):
                col = mat.cols[n]
                for t, v in self.cell_boundary(cell).items():
                    col[target[t]] = v
            self.boundary[d] = mat

    @property
    def rank(self) -> int:
        return self.rs.rank

    def dims(self) -> List[int]:
        return [len(b) for b in self.bases]

    def cell_boundary(self, cell: Cell) -> Dict[Cell, int]:
        out: Dict[Cell, int] = {}
        for _, _, sign, D in boundary_pieces(cell.diagram):
            target, o = _push(self.rs, self.W, cell.coset, D.labels)
            out[target] = out.get(target, 0) + sign * o
        return {c: v for c, v in out.items() if v}

    def boundary_of(self, chain: Chain) -> Chain:
        out: Dict[Cell, int] = {}
        for cell, v in chain.coeffs.items():
            for t, u in self.cell_boundary(cell).items():
                out[t] = out.get(t, 0) + u * v
        return Chain(chain.dimension - 1, out)

    def act_generator(self, i: int, cell: Cell) -> Tuple[Cell, int]:
        return _push(self.rs, self.W, self.W.left[i][cell.coset], cell.diagram)

    def act(self, w: int, chain: Chain) -> Chain:
        """Left translation by ``w``, applied letter by letter along its reduced word."""
        coeffs = dict(chain.coeffs)
        for i in reversed(self.W.words[w]):
            nxt: Dict[Cell, int] = {}
            for cell, v in coeffs.items():
                t, o = self.act_generator(i, cell)
                nxt[t] = nxt.get(t, 0) + o * v
            coeffs = nxt
        return Chain(chain.dimension, coeffs)

    def action_matrix(self, w: int, d: int) -> IntMatrix:
        basis, index = self.bases[d], self.index[d]
        mat = IntMatrix(len(basis), len(basis))
        for n, cell in enumerate(basis):
            img = self.act(w, Chain(d, {cell: 1}))
            mat.cols[n] = {index[c]: v for c, v in img.coeffs.items()}
        return mat

    def chain_vector(self, chain: Chain) -> Dict[int, int]:
        idx = self.index[chain.dimension]
        return {idx[c]: v for c, v in chain.coeffs.items()}


def build_complex(rs: RootSystem, W: WeylGroup) -> ChainComplex:
    return ChainComplex(rs, W)


def f_vector(cc: ChainComplex) -> List[int]:
    return cc.dims()


def expected_dims(W: WeylGroup) -> List[int]:
    """dim M_{l-k} = sum over |S| = k of 2^k [W : W_S], by coset counting."""
    l = W.rank
    out = [0] * (l + 1)
    for k in range(l + 1):
        for S in combinations(range(l), k):
            out[l - k] += 2**k * len(minimal_representatives(W, S))
    return out


def verify_d_squared(cc: ChainComplex) -> bool:
    return all((cc.boundary[d - 1] @ cc.boundary[d]).is_zero()
               for d in range(2, cc.rank + 1))


def verify_equivariance(cc: ChainComplex) -> bool:
    """Check boundary(s x) == s boundary(x) for every generator and basis cell."""
    for d in range(1, cc.rank + 1):
        for cell in cc.bases[d]:
            x = Chain(d, {cell: 1})
            dx = cc.boundary_of(x)
            for i in range(cc.rank):
                g = cc.W.right[0][i]
                if cc.boundary_of(cc.act(g, x)).coeffs != cc.act(g, dx).coeffs:
                    return False
    return True


def euler_characteristic(cc: ChainComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(cc.dims()))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TODA_TOPO_THREADS", "1")))
    except ValueError:
        return 1


def boundary_snf(cc: ChainComplex) -> Dict[int, Tuple[List[int], int]]:
    degrees = list(range(1, cc.rank + 1))
    workers = min(_threads(), len(degrees))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(smith_normal_form, [cc.boundary[d] for d in degrees]))
    else:
        results = [smith_normal_form(cc.boundary[d]) for d in degrees]
    return dict(zip(degrees, results))


def homology(cc: ChainComplex, check: bool = True) -> List[HomologyGroup]:
    """Integral homology H_0..H_l via Smith normal form of each boundary."""
    if check and not verify_d_squared(cc):
        raise ComplexInconsistent("boundary composed with boundary is nonzero")
    snf = boundary_snf(cc)
    dims = cc.dims()
    out = []
    for d in range(cc.rank + 1):
        r_out = snf[d][1] if d in snf else 0
        f_in, r_in = snf.get(d + 1, ([], 0))
        out.append(HomologyGroup(d, dims[d] - r_out - r_in, tuple(x for x in f_in if x > 1)))
    return out


def homology_summary(cc: ChainComplex) -> dict:
    hs = homology(cc)
    return {
        "type": cc.rs.name,
        "dims": cc.dims(),
        "betti": [h.betti for h in hs],
        "torsion": [list(h.torsion) for h in hs],
        "euler": euler_characteristic(cc),
    }


def top_cycle(cc: ChainComplex) -> Tuple[Chain, Chain]:
    """c_l = sum_w (-1)^len(w) (all-uncolored, w) and its boundary."""
    l = cc.rank
    top = Chain(l, {Cell("u" * l, w): (-1) ** cc.W.lengths[w] for w in range(cc.W.order)})
    return top, cc.boundary_of(top)


def half_boundary_of_top(cc: ChainComplex) -> Chain:
    """c_{l-1} with boundary(c_l) = 2 c_{l-1}; raises if some coefficient is odd."""
    _, bd = top_cycle(cc)
    if any(v % 2 for v in bd.coeffs.values()):
        raise ComplexInconsistent("boundary of the top cycle has an odd coefficient")
    return Chain(bd.dimension, {c: v // 2 for c, v in bd.coeffs.items()})


def rational_character(cc: ChainComplex, k: int) -> List[dict]:
    """Trace of each conjugacy class on H_k(Q), exact.

    A basis of the cycles is chosen to extend a basis of the boundaries; the
    complement represents H_k(Q) and each class representative is expressed
    in that basis to read off its trace.
    """
    W = cc.W
    n = len(cc.bases[k])
    classes = conjugacy_classes(W)
    if n == 0:
        return [{"representative": W.name(c[0]), "size": len(c), "trace": 0} for c in classes]
    Z = qlinalg.kernel(cc.boundary[k].to_dense()) if k >= 1 else qlinalg.identity(n)
    B = (qlinalg.column_basis(cc.boundary[k + 1].to_dense())
         if k + 1 in cc.boundary else [])
    basis, n_b = qlinalg.extend_basis(B, Z, n)
    coords = qlinalg.Coordinates(basis)
    out = []
    for cls in classes:
        g = cls[0]
        act = cc.action_matrix(g, k)
        trace = Fraction(0)
        for t in range(n_b, len(basis)):
            img = [Fraction(0)] * n
            for j, v in enumerate(basis[t]):
                if v:
                    for i, u in act.cols[j].items():
                        img[i] += u * v
            trace += coords.solve(img)[t]
        assert trace.denominator == 1
        out.append({"representative": W.name(g), "size": len(cls), "trace": int(trace)})
    return out


def count_by_dimension(cells: Iterable[Cell], rank: int) -> List[int]:
    out = [0] * (rank + 1)
    for c in cells:
        out[c.dimension] += 1
    return out
