"""Indefinite Toda lattice: (a, b) flow, Lax matrix, invariants, blow-up events.

The flow is

    a_i' = b_i,     b_i' = -b_i * sum_j C[i][j] a_j,

integrated with an embedded Dormand-Prince 5(4) pair.  Lax matrices and
their characteristic-polynomial invariants are provided for type A in the
defining representation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .atlas import blowup_transition
from .errors import ToleranceUnreachable
from .rootsys import RootSystem, build_root_system

BLOWUP_THRESHOLD = 1e8
BLOWUP_STEP = 1e-10
BLOWUP_HISTORY = 5
# invariants are only compared while the state stays this small; beyond it
# cancellation in the characteristic polynomial swamps the integration error
DRIFT_WINDOW = 1e3

# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@dataclass(frozen=True)
class TodaState:
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    epsilon: Tuple[int, ...]
    t: float = 0.0

    @classmethod
    def make(cls, a: Sequence[float], b: Sequence[float],
             epsilon: Optional[Sequence[int]] = None, t: float = 0.0) -> "TodaState":
        """Build a state; signs default to sign(b_i), or +1 where b_i = 0."""
        a = tuple(float(x) for x in a)
        b = tuple(float(x) for x in b)
        if len(a) != len(b):
            raise ValueError("a and b must have the same length")
        if epsilon is None:
            epsilon = tuple(-1 if x < 0 else 1 for x in b)
        epsilon = tuple(int(e) for e in epsilon)
        if len(epsilon) != len(b) or any(e not in (1, -1) for e in epsilon):
            raise ValueError("epsilon must be a vector of +-1 matching b")
        for x, e in zip(b, epsilon):
            if x != 0 and (x > 0) != (e > 0):
                raise ValueError(f"sign of b={x} disagrees with epsilon={e}")
        return cls(a, b, epsilon, float(t))

    @property
    def rank(self) -> int:
        return len(self.a)

    def to_json(self) -> dict:
        return {"t": self.t, "a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class LaxPair:
    X: np.ndarray
    P: np.ndarray


@dataclass(frozen=True)
class BlowupEvent:
    index: int
    t_star: float
    epsilon_after: Tuple[int, ...]

    def to_json(self) -> dict:
        return {"index": self.index + 1, "t_star": self.t_star,
                "epsilon_after": list(self.epsilon_after)}


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    epsilon: Tuple[int, ...]
    events: List[BlowupEvent] = field(default_factory=list)
    invariant_drift: Optional[float] = None

    @property
    def rank(self) -> int:
        return self.y.shape[1] // 2

    @property
    def a(self) -> np.ndarray:
        return self.y[:, : self.rank]

    @property
    def b(self) -> np.ndarray:
        return self.y[:, self.rank:]

    def states(self) -> List[TodaState]:
        l = self.rank
        return [TodaState(tuple(row[:l]), tuple(row[l:]), self.epsilon, float(t))
                for t, row in zip(self.t, self.y)]

    def interpolate(self, t: float) -> np.ndarray:
        """Cubic Hermite dense output of (a, b) at time ``t``."""
        if not self.t[0] <= t <= self.t[-1]:
            raise ValueError(f"t={t} outside the integrated interval")
        k = int(np.searchsorted(self.t, t, side="right")) - 1
        k = min(max(k, 0), len(self.t) - 2)
        t0, t1 = self.t[k], self.t[k + 1]
        h = t1 - t0
        s = (t - t0) / h
        h00 = 2 * s**3 - 3 * s**2 + 1
        h10 = s**3 - 2 * s**2 + s
        h01 = -2 * s**3 + 3 * s**2
        h11 = s**3 - s**2
        return (h00 * self.y[k] + h10 * h * self.dy[k]
                + h01 * self.y[k + 1] + h11 * h * self.dy[k + 1])

    def to_json(self, samples: Optional[int] = None) -> dict:
        l = self.rank
        if samples:
            grid = np.linspace(self.t[0], self.t[-1], samples)
            rows = [(float(t), self.interpolate(float(t))) for t in grid]
        else:
            rows = [(float(t), y) for t, y in zip(self.t, self.y)]
        return {
            "epsilon": list(self.epsilon),
            "samples": [{"t": t, "a": [float(x) for x in y[:l]], "b": [float(x) for x in y[l:]]}
                        for t, y in rows],
            "invariant_drift": self.invariant_drift,
            "events": [e.to_json() for e in self.events],
        }

    def to_csv(self, samples: Optional[int] = None) -> str:
        l = self.rank
        header = ["t"] + [f"a{i + 1}" for i in range(l)] + [f"b{i + 1}" for i in range(l)]
        lines = [",".join(header)]
        if samples:
            grid = np.linspace(self.t[0], self.t[-1], samples)
            rows = [(float(t), self.interpolate(float(t))) for t in grid]
        else:
            rows = [(float(t), y) for t, y in zip(self.t, self.y)]
        for t, y in rows:
            lines.append(",".join(repr(float(v)) for v in (t, *y)))
        return "\n".join(lines) + "\n"


def _cartan(rs) -> np.ndarray:
    if isinstance(rs, RootSystem):
        return np.array(rs.cartan, dtype=float)
    return np.asarray(rs, dtype=float)


def type_a(rank: int) -> RootSystem:
    return build_root_system("A", rank, rank_cap=max(rank, 6))


def toda_rhs(rs, state: TodaState) -> Tuple[np.ndarray, np.ndarray]:
    """(da/dt, db/dt) at ``state``; ``rs`` is a RootSystem or a Cartan matrix."""
    C = _cartan(rs)
    a = np.array(state.a)
    b = np.array(state.b)
    return b.copy(), -b * (C @ a)


def lax_matrix(state: TodaState) -> np.ndarray:
    """X = sum a_i h_i + sum (b_i e_{-i} + e_i) for sl(l+1) in the defining representation."""
    l = state.rank
    X = np.zeros((l + 1, l + 1))
    a = (0.0,) + tuple(state.a) + (0.0,)
    for k in range(l + 1):
        X[k, k] = a[k + 1] - a[k]
    for i in range(l):
        X[i, i + 1] = 1.0
        X[i + 1, i] = state.b[i]
    return X


def lax_pair(state: TodaState) -> LaxPair:
    X = lax_matrix(state)
    return LaxPair(X, -np.tril(X, -1))


def charpoly(X: np.ndarray) -> np.ndarray:
    """Coefficients [1, c_1, ..., c_n] of det(lambda I - X) for tridiagonal X.

    Uses the three-term continuant recurrence; only the products
    X[k, k-1] * X[k-1, k] enter, so no eigenvalues are computed.
    """
    n = X.shape[0]
    prev = np.array([1.0])
    cur = np.array([1.0, -X[0, 0]])
    for k in range(1, n):
        nxt = np.convolve(cur, [1.0, -X[k, k]])
        nxt[2:] -= X[k, k - 1] * X[k - 1, k] * prev
        prev, cur = cur, nxt
    return cur if n > 1 else np.array([1.0, -X[0, 0]])


def invariants(X: np.ndarray) -> np.ndarray:
    """Characteristic-polynomial coefficients c_2, ..., c_{l+1} (c_1 = -trace = 0)."""
    return charpoly(X)[2:]


def b_from_f(rs, f: Sequence[float], eps: Sequence[int]) -> np.ndarray:
    C = _cartan(rs)
    return np.asarray(eps, dtype=float) * np.exp(-(C @ np.asarray(f, dtype=float)))


def positions_from_f(f: Sequence[float]) -> np.ndarray:
    f = np.append(np.asarray(f, dtype=float), 0.0)
    return f[:-1] - f[1:]


def _rel_drift(inv: np.ndarray, inv0: np.ndarray) -> float:
    return float(np.max(np.abs(inv - inv0) / np.maximum(np.abs(inv0), 1.0))) if inv.size else 0.0


def _estimate_t_star(ts: Sequence[float], bs: Sequence[float]) -> float:
    """Extrapolate |b|^(-1/2) -> 0 (linear near a double pole), with one Richardson step."""
    u = [abs(x) ** -0.5 for x in bs[-3:]]
    t = list(ts[-3:])

    def secant(k):
        return t[k + 1] + u[k + 1] * (t[k + 1] - t[k]) / (u[k] - u[k + 1])

    e1, e2 = secant(0), secant(1)
    r = u[2] / u[0]
    return (e2 - r * e1) / (1 - r) if r < 1 else e2


def integrate(state0: TodaState, t_end: float, tol: float = 1e-10,
              rs: Optional[RootSystem] = None, max_steps: int = 1_000_000) -> Trajectory:
    """Adaptive integration from ``state0.t`` to ``t_end`` or the first blow-up."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    l = state0.rank
    rs = rs or type_a(l)
    C = _cartan(rs)
    track = rs.type_label == "A"

    def f(y):
        a, b = y[:l], y[l:]
        return np.concatenate([b, -b * (C @ a)])

    def inv_of(y):
        return invariants(lax_matrix(TodaState(tuple(y[:l]), tuple(y[l:]), state0.epsilon)))

    t = state0.t
    y = np.array(state0.a + state0.b, dtype=float)
    k1 = f(y)
    ts, ys, dys = [t], [y.copy()], [k1.copy()]
    inv0 = inv_of(y) if track else None
    drift = 0.0

    scale0 = tol + tol * np.abs(y)
    with np.errstate(all="ignore"):
        d0, d1 = np.linalg.norm(y / scale0), np.linalg.norm(k1 / scale0)
        h = 0.01 * d0 / d1
    if not (d0 >= 1e-5 and d1 >= 1e-5 and math.isfinite(h)):
        h = 1e-6
    h = min(h, abs(t_end - t)) if t_end > t else 0.0

    events: List[BlowupEvent] = []
    for _ in range(max_steps):
        if t >= t_end:
            break
        h = min(h, t_end - t)
        floor = 16 * np.finfo(float).eps * max(1.0, abs(t))
        if h < floor:
            raise ToleranceUnreachable(f"step size collapsed to {h:.3e} at t={t:.12g} "
                                       "without a blow-up signature")
        K = [k1]
        for s in range(1, 7):
            K.append(f(y + h * sum(c * k for c, k in zip(_A[s], K))))
        y_new = y + h * sum(c * k for c, k in zip(_B5, K) if c)
        if not np.all(np.isfinite(y_new)):
            h *= 0.2
            continue
        err_vec = h * sum(c * k for c, k in zip(_E, K))
        sc = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        with np.errstate(all="ignore"):
            err = float(np.sqrt(np.mean((err_vec / sc) ** 2)))
        if not err <= 1.0:
            h *= max(0.2, 0.9 * err ** -0.2) if math.isfinite(err) else 0.2
            continue
        step = h
        t, y, k1 = t + h, y_new, K[6]
        ts.append(t)
        ys.append(y.copy())
        dys.append(k1.copy())
        if track and np.max(np.abs(y)) <= DRIFT_WINDOW:
            drift = max(drift, _rel_drift(inv_of(y), inv0))
        h *= min(5.0, max(0.2, 0.9 * err ** -0.2)) if err > 0 else 5.0

        if step < BLOWUP_STEP and len(ys) > BLOWUP_HISTORY:
            for i in range(l):
                hist = [abs(v[l + i]) for v in ys[-BLOWUP_HISTORY - 1:]]
                if hist[-1] > BLOWUP_THRESHOLD and all(p < q for p, q in zip(hist, hist[1:])):
                    t_star = _estimate_t_star(ts, [v[l + i] for v in ys])
                    events.append(BlowupEvent(i, float(t_star), blowup_transition(rs, state0.epsilon, i)))
                    break
            if events:
                break
    else:
        raise ToleranceUnreachable(f"max_steps={max_steps} reached at t={t}")

    return Trajectory(np.array(ts), np.array(ys), np.array(dys), state0.epsilon, events,
                      drift if track else None)
