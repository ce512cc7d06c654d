"""Colored and signed-colored Dynkin diagrams and the W_S actions on them.

A diagram is stored as a string with one character per simple root, in
vertex order:

    u   uncolored
    R   colored red  (character value -1, external face)
    B   colored blue (character value +1, internal wall)
    +   uncolored, positive sign
    -   uncolored, negative sign
    0   uncolored, zero (Levi stratum)

so ``"Ru"`` is the A_2 diagram with the first vertex red and the second
uncolored.  Vertex indices passed to functions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NoUncoloredVertices, VertexNotColored, ZeroVertexAction
from .rootsys import RootSystem

COLORED = frozenset("RB")
SIGNED = frozenset("+-0")
_FLIP = {"R": "B", "B": "R", "+": "-", "-": "+"}
_NEGATIVE = frozenset("R-")


@dataclass(frozen=True)
class ColoredDiagram:
    labels: str

    def __post_init__(self):
        if set(self.labels) - set("uRB"):
            raise ValueError(f"invalid colored diagram {self.labels!r}")

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.labels) if c in COLORED)

    @property
    def uncolored(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.labels) if c not in COLORED)

    @property
    def eta(self) -> Dict[int, int]:
        return {i: (-1 if self.labels[i] == "R" else 1) for i in self.S}

    def __str__(self) -> str:
        return self.labels


@dataclass(frozen=True)
class OrientedDiagram:
    diagram: ColoredDiagram
    o: int = 1

    def __post_init__(self):
        if self.o not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def to_json(self) -> dict:
        return {"diagram": self.diagram.labels, "orientation": self.o}

    @classmethod
    def from_json(cls, obj: dict) -> "OrientedDiagram":
        return cls(ColoredDiagram(obj["diagram"]), int(obj.get("orientation", 1)))


@dataclass(frozen=True)
class SignedColoredDiagram:
    labels: str

    def __post_init__(self):
        if set(self.labels) - set("RB+-0"):
            raise ValueError(f"invalid signed-colored diagram {self.labels!r}")

    @property
    def S(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.labels) if c in COLORED)

    @property
    def A(self) -> Tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.labels) if c == "0")

    @property
    def signs(self) -> Tuple[int, ...]:
        """Sign vector; 0-labelled vertices carry 0."""
        return tuple(-1 if c in _NEGATIVE else (0 if c == "0" else 1) for c in self.labels)

    def forget(self) -> ColoredDiagram:
        return ColoredDiagram("".join(c if c in COLORED else "u" for c in self.labels))

    def __str__(self) -> str:
        return self.labels


def _labels(d) -> str:
    return d if isinstance(d, str) else d.labels


def flip_labels(cartan, i: int, labels: str, active: frozenset) -> str:
    """Apply eps'_j = eps_j * eps_i^(-C[j][i]) to the labels in ``active``.

    Only the parity of C[j][i] matters since eps_i = +-1.
    """
    if labels[i] not in _NEGATIVE:
        return labels
    out = list(labels)
    for j, c in enumerate(labels):
        if j != i and c in active and cartan[j][i] % 2:
            out[j] = _FLIP[c]
    return "".join(out)


def boundary_pieces(D) -> List[Tuple[int, int, int, ColoredDiagram]]:
    """All (j, c, sign, D') with D' coloring the j-th uncolored vertex.

    ``j`` is 1-based within the sorted uncolored list; c = 1 paints R, c = 2
    paints B; sign = (-1)^(j+c+1).
    """
    labels = _labels(D)
    free = [i for i, c in enumerate(labels) if c == "u"]
    if not free:
        raise NoUncoloredVertices(f"{labels!r} has no uncolored vertex")
    out = []
    for j, v in enumerate(free, start=1):
        for c, paint in ((1, "R"), (2, "B")):
            sign = -1 if (j + c + 1) % 2 else 1
            out.append((j, c, sign, ColoredDiagram(labels[:v] + paint + labels[v + 1:])))
    return out


def color_action(rs: RootSystem, i: int, D) -> ColoredDiagram:
    labels = _labels(D)
    if labels[i] not in COLORED:
        raise VertexNotColored(f"vertex {i + 1} of {labels!r} is not colored")
    return ColoredDiagram(flip_labels(rs.cartan, i, labels, COLORED))


def orientation_exponent(rs: RootSystem, i: int, labels: str) -> int:
    """Number of uncolored vertices j with C[j][i] odd."""
    return sum(1 for j, c in enumerate(labels)
               if c not in COLORED and j != i and rs.cartan[j][i] % 2)


def oriented_action(rs: RootSystem, i: int, D, o: int = 1) -> Tuple[ColoredDiagram, int]:
    labels = _labels(D)
    if labels[i] not in COLORED:
        raise VertexNotColored(f"vertex {i + 1} of {labels!r} is not colored")
    if labels[i] == "R" and orientation_exponent(rs, i, labels) % 2:
        o = -o
    return ColoredDiagram(flip_labels(rs.cartan, i, labels, COLORED)), o


def act_word(rs: RootSystem, word: Sequence[int], labels: str, o: int = 1) -> Tuple[str, int]:
    """Apply the oriented action of ``word[0]`` first, then ``word[1]``, ..."""
    for i in word:
        if labels[i] == "R" and orientation_exponent(rs, i, labels) % 2:
            o = -o
        labels = flip_labels(rs.cartan, i, labels, COLORED)
    return labels, o


def signed_action(rs: RootSystem, i: int, D) -> SignedColoredDiagram:
    """Sign-rule action where ``-`` behaves like R, ``+`` like B; ``0`` is inert."""
    labels = _labels(D)
    if labels[i] == "0":
        raise ZeroVertexAction(f"vertex {i + 1} of {labels!r} is labelled 0")
    return SignedColoredDiagram(flip_labels(rs.cartan, i, labels, frozenset("RB+-")))


def colorings(rank: int, S: Sequence[int]) -> List[str]:
    """Colored diagrams with colored set S, ordered by bitmask (bit t set: t-th vertex of S is R)."""
    out = []
    for mask in range(1 << len(S)):
        lab = ["u"] * rank
        for t, v in enumerate(S):
            lab[v] = "R" if mask >> t & 1 else "B"
        out.append("".join(lab))
    return out


@dataclass
class CoxeterReport:
    S: Tuple[int, ...]
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        return {"S": [i + 1 for i in self.S], "passed": self.passed,
                "checked": self.checked, "counterexample": self.counterexample}


def verify_coxeter(rs: RootSystem, S: Sequence[int]) -> CoxeterReport:
    """Check s_i^2 = 1 and (s_i s_j)^m_ij = 1 on every oriented diagram with colored set S."""
    S = tuple(sorted(S))
    checked = 0
    for labels, o in product(colorings(rs.rank, S), (1, -1)):
        relations = [((i,), 2) for i in S]
        relations += [((i, j), rs.coxeter_orders[i][j]) for i in S for j in S if i < j]
        for gens, m in relations:
            got = act_word(rs, gens * m, labels, o)
            checked += 1
            if got != (labels, o):
                return CoxeterReport(S, False, checked, {
                    "diagram": labels, "orientation": o,
                    "relation": [g + 1 for g in gens], "power": m,
                    "result": {"diagram": got[0], "orientation": got[1]}})
    return CoxeterReport(S, True, checked)
