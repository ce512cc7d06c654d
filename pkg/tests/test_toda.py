from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rank1_blowup_time, rank1_closed_form
from toda_topo import toda
from toda_topo.atlas import blowup_transition
from toda_topo.errors import ToleranceUnreachable
from toda_topo.rootsys import build_root_system

A1 = build_root_system("A1")
A2 = build_root_system("A2")


def S(a, b, eps=None):
    return toda.TodaState.make(a, b, eps)


def test_rhs_examples():
    da, db = toda.toda_rhs(A1, S([0], [1]))
    assert list(da) == [1] and list(db) == [0]
    da, db = toda.toda_rhs(A1, S([1], [-1]))
    assert list(da) == [-1] and list(db) == [2]
    da, db = toda.toda_rhs(A2, S([0, 0], [1, 1]))
    assert list(da) == [1, 1] and list(db) == [0, 0]


def test_lax_matrix_examples():
    assert toda.lax_matrix(S([0.5], [3])).tolist() == [[0.5, 1], [3, -0.5]]
    X = toda.lax_matrix(S([0, 0], [2, 5]))
    assert X.tolist() == [[0, 1, 0], [2, 0, 1], [0, 5, 0]]
    assert np.diag(toda.lax_matrix(S([1, 2], [1, 1]))).tolist() == [1, 1, -2]


def test_invariants_examples():
    assert toda.invariants(toda.lax_matrix(S([0.7], [0.2]))).tolist() == pytest.approx([-0.49 - 0.2])
    assert toda.invariants(toda.lax_matrix(S([0], [1]))).tolist() == [-1]
    assert toda.invariants(toda.lax_matrix(S([0, 0], [1, 1]))).tolist() == [-2, 0]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3),
       st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_charpoly_matches_numpy(a, b):
    X = toda.lax_matrix(S(a, b))
    assert np.allclose(toda.charpoly(X), np.poly(X), atol=1e-8)


def test_lax_equation_matches_flow():
    # dX/dt = [P, X] with P = -sum b_i e_{-alpha_i}
    rng = np.random.default_rng(3)
    state = S(rng.normal(size=3), rng.normal(size=3))
    da, db = toda.toda_rhs(build_root_system("A3"), state)
    dX = toda.lax_matrix(toda.TodaState(tuple(da), tuple(db), state.epsilon)) - np.eye(4, k=1)
    pair = toda.lax_pair(state)
    assert np.allclose(dX, pair.P @ pair.X - pair.X @ pair.P)


def test_b_from_f_and_positions():
    assert toda.b_from_f(A2, [0, 0], [1, -1]).tolist() == [1, -1]
    assert toda.b_from_f(A1, [-math.log(2) / 2], [1]) == pytest.approx([2])
    assert toda.b_from_f(A2, [1, 0], [1, -1]) == pytest.approx([math.exp(-2), -math.exp(1)])
    assert toda.positions_from_f([0, 0]).tolist() == [0, 0]
    assert toda.positions_from_f([1, 0]).tolist() == [1, 0]
    assert toda.positions_from_f([3, 1]).tolist() == [2, 1]


@pytest.mark.parametrize("label", ["A2", "B3", "G2"])
def test_finite_difference_consistency(label):
    rs = build_root_system(label)
    rng = np.random.default_rng(11)
    f = rng.normal(size=rs.rank)
    a = rng.normal(size=rs.rank)
    eps = [1, -1, 1][: rs.rank]
    h = 1e-6
    fd = (toda.b_from_f(rs, f + h * a, eps) - toda.b_from_f(rs, f - h * a, eps)) / (2 * h)
    _, db = toda.toda_rhs(rs, S(a, toda.b_from_f(rs, f, eps), eps))
    assert np.max(np.abs(fd - db) / np.abs(db)) <= 1e-5


def test_rank1_tanh_branch():
    traj = toda.integrate(S([0], [1]), 10.0, 1e-10, rs=A1)
    assert not traj.events
    assert traj.invariant_drift <= 1e-8
    for t, a in zip(traj.t, traj.a[:, 0]):
        assert abs(a - rank1_closed_form(0.0, 1.0, t)) <= 1e-6
    assert np.allclose(traj.b[:, 0], 1 - traj.a[:, 0] ** 2, atol=1e-8)


def test_rank1_coth_blowup():
    a0, b0 = -2.0, -3.0
    traj = toda.integrate(S([a0], [b0]), 2.0, 1e-10, rs=A1)
    assert len(traj.events) == 1
    ev = traj.events[0]
    assert abs(ev.t_star - rank1_blowup_time(a0, b0)) <= 1e-6
    assert abs(ev.t_star - 0.5 * math.log(3)) <= 1e-6
    assert ev.epsilon_after == blowup_transition(A1, (-1,), 0)
    # inside ~1e-5 of the pole a timing error of 1e-11 already costs 1e-6 relative
    window = traj.t <= ev.t_star - 1e-4
    assert window.sum() > 100
    for t, a in zip(traj.t[window], traj.a[window, 0]):
        exact = rank1_closed_form(a0, b0, t)
        assert abs(a - exact) <= 1e-6 * max(1.0, abs(exact))


def test_forward_coth_without_blowup():
    # a0 > lam: a decreases towards lam, no event
    traj = toda.integrate(S([2], [-3]), 5.0, 1e-10, rs=A1)
    assert not traj.events
    assert abs(traj.a[-1, 0] - rank1_closed_form(2.0, -3.0, 5.0)) <= 1e-6


def test_definite_a2_no_events_and_sign_preservation():
    rng = np.random.default_rng(5)
    traj = toda.integrate(S(rng.normal(size=2), rng.uniform(0.2, 2, size=2)), 20.0, 1e-10)
    assert not traj.events
    assert traj.invariant_drift <= 1e-8
    assert np.all(traj.b > 0)


def test_indefinite_a2_event_and_signs():
    traj = toda.integrate(S([0, 0], [1, -1]), 10.0, 1e-10, rs=A2)
    assert len(traj.events) == 1
    ev = traj.events[0]
    assert ev.epsilon_after == blowup_transition(A2, (1, -1), ev.index)
    before = traj.b[:-1]
    assert np.all(before[:, 0] > 0) and np.all(before[:, 1] < 0)


def test_subsystem_decoupling():
    traj = toda.integrate(S([0.3, -0.4, 0.1], [1.0, 0.0, 0.5]), 3.0, 1e-10)
    assert np.all(traj.b[:, 1] == 0)
    assert np.all(traj.a[:, 1] == -0.4)
    # a_2 is frozen, so a_1 + 0.2 and a_3 + 0.2 each follow an independent rank-1 flow
    for t, row in zip(traj.t, traj.a):
        assert abs(row[0] + 0.2 - rank1_closed_form(0.5, 1.0, t)) <= 1e-6
        assert abs(row[2] + 0.2 - rank1_closed_form(0.3, 0.5, t)) <= 1e-6


def test_interpolation_reproduces_steps():
    traj = toda.integrate(S([0], [1]), 2.0, 1e-10)
    for k in (0, 5, len(traj.t) - 1):
        assert np.allclose(traj.interpolate(float(traj.t[k])), traj.y[k])
    mid = 0.5 * (traj.t[3] + traj.t[4])
    assert traj.interpolate(mid)[0] == pytest.approx(rank1_closed_form(0, 1, mid), abs=1e-8)


def test_tolerance_unreachable():
    with pytest.raises(ToleranceUnreachable):
        toda.integrate(S([0], [1]), 1.0, 1e-300)


def test_state_validation():
    with pytest.raises(ValueError):
        toda.TodaState.make([0], [1], [-1])
    with pytest.raises(ValueError):
        toda.TodaState.make([0, 1], [1])
    assert toda.TodaState.make([0], [0]).epsilon == (1,)
