"""Chart coordinates on the compactified Cartan manifold.

Each chamber w carries a chart onto the box [-1, 1]^l whose i-th coordinate
is the simple-root character value (0 on a Levi stratum).  A point's
coordinates determine a signed-colored diagram one vertex at a time:

    t = -1 -> R,  t = +1 -> B,  t = 0 -> 0,  0 < t < 1 -> +,  -1 < t < 0 -> -

Boundary values are compared exactly, never with a tolerance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .diagram import COLORED, SignedColoredDiagram, colorings, flip_labels
from .errors import OutOfChart
from .rootsys import RootSystem, WeylGroup

_ACTIVE = frozenset("RB+-")


@dataclass(frozen=True)
class ChartPoint:
    chamber: int
    coords: Tuple[float, ...]

    def __post_init__(self):
        if any(abs(t) > 1 for t in self.coords):
            raise OutOfChart(f"coordinates {self.coords} leave [-1, 1]")


@dataclass(frozen=True)
class CellDescriptor:
    """A (signed-)colored diagram together with a coset representative."""

    diagram: str
    coset: int

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.diagram) if c in COLORED)

    @property
    def A(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.diagram) if c == "0")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, t: float) -> bool:
        return t == self.lo if self.is_point else self.lo < t < self.hi

    def sample(self, rng: random.Random, margin: float = 1e-9) -> float:
        if self.is_point:
            return self.lo
        return rng.uniform(self.lo + margin, self.hi - margin)

    def to_json(self):
        return [self.lo] if self.is_point else [self.lo, self.hi]


_IMAGE = {
    "R": Interval(-1.0, -1.0),
    "B": Interval(1.0, 1.0),
    "0": Interval(0.0, 0.0),
    "+": Interval(0.0, 1.0),
    "-": Interval(-1.0, 0.0),
    "u": Interval(-1.0, 1.0),
}


@dataclass(frozen=True)
class Box:
    sides: Tuple[Interval, ...]

    def contains(self, coords: Sequence[float]) -> bool:
        return len(coords) == len(self.sides) and all(
            s.contains(t) for s, t in zip(self.sides, coords))

    def sample(self, rng: random.Random) -> Tuple[float, ...]:
        return tuple(s.sample(rng) for s in self.sides)

    def to_json(self) -> list:
        return [s.to_json() for s in self.sides]


def _label(t: float) -> str:
    if t == -1:
        return "R"
    if t == 1:
        return "B"
    if t == 0:
        return "0"
    if 0 < t < 1:
        return "+"
    if -1 < t < 0:
        return "-"
    raise OutOfChart(f"coordinate {t} outside [-1, 1]")


def classify_point(p: ChartPoint) -> SignedColoredDiagram:
    return SignedColoredDiagram("".join(_label(t) for t in p.coords))


def chart_image(cell) -> Box:
    """Box in chart coordinates; ``u`` vertices (union over signs and 0) give (-1, 1)."""
    if isinstance(cell, CellDescriptor):
        labels = cell.diagram
    else:
        labels = cell if isinstance(cell, str) else cell.labels
    return Box(tuple(_IMAGE[c] for c in labels))


def canonicalize_cell(W: WeylGroup, w: int, diagram) -> Tuple[str, int]:
    """Move (w, diagram) to its minimal coset representative for the colored set.

    Writes w = w_min * u with u in W_S and lets u act on the labels; R/B and
    +/- follow the sign rule, u and 0 are inert.
    """
    labels = diagram if isinstance(diagram, str) else diagram.labels
    S = tuple(i for i, c in enumerate(labels) if c in COLORED)
    rep, word = W.coset_split(w, S)
    cartan = W.root_system.cartan
    for i in word:
        labels = flip_labels(cartan, i, labels, _ACTIVE)
    return labels, rep


def canonical_cells(W: WeylGroup) -> Set[Tuple[str, int]]:
    """Distinct canonical (colored diagram, coset) pairs, by exhaustive canonicalization."""
    l = W.rank
    out: Set[Tuple[str, int]] = set()
    for k in range(l + 1):
        for S in combinations(range(l), k):
            for labels in colorings(l, S):
                for w in range(W.order):
                    out.add(canonicalize_cell(W, w, labels))
    return out


def count_cells(rs: RootSystem, W: WeylGroup) -> List[int]:
    """f-vector (cells per dimension 0..l) of the canonical colored cells."""
    out = [0] * (rs.rank + 1)
    for labels, _ in canonical_cells(W):
        out[labels.count("u")] += 1
    return out


def blowup_transition(rs: RootSystem, eps: Sequence[int], i: int) -> Tuple[int, ...]:
    """Sign vector after b_i blows up: eps'_j = eps_j * eps_i^(-C[j][i])."""
    e = eps[i]
    return tuple(x * (e if rs.cartan[j][i] % 2 else 1) for j, x in enumerate(eps))


def basis_key(labels: str, rep: int) -> tuple:
    """Sort key (|S|, S, coset index, R-bitmask over S) shared with the chain complex."""
    S = tuple(i for i, c in enumerate(labels) if c in COLORED)
    mask = sum(1 << t for t, v in enumerate(S) if labels[v] == "R")
    return len(S), S, rep, mask


def list_cells(W: WeylGroup) -> List[dict]:
    cells = sorted(canonical_cells(W), key=lambda c: basis_key(*c))
    return [{"diagram": labels, "coset": W.name(rep), "dimension": labels.count("u"),
             "box": chart_image(labels).to_json()} for labels, rep in cells]


def classify(W: WeylGroup, chamber: int, coords: Sequence[float]) -> dict:
    d = classify_point(ChartPoint(chamber, tuple(coords)))
    labels, rep = canonicalize_cell(W, chamber, d)
    return {"chamber": W.name(chamber), "point": list(coords), "diagram": d.labels,
            "canonical": {"diagram": labels, "coset": W.name(rep)}}
