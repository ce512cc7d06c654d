from __future__ import annotations

from hypothesis import given, settings, strategies as st

from oracles import modp_rank, sympy_invariant_factors
from toda_topo.snf import IntMatrix, rank, smith_normal_form


def test_small_examples():
    assert smith_normal_form([[2]]) == ([2], 1)
    assert smith_normal_form([[1, 0], [0, 0]]) == ([1], 1)
    assert smith_normal_form([[2, 4], [6, 8]]) == ([2, 4], 2)
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 0)


def test_triplet_round_trip():
    m = IntMatrix.from_dense([[0, 3, 0], [-1, 0, 2]])
    text = m.to_triplet_text()
    assert text == "0 1 3\n1 0 -1\n1 2 2\n"
    assert IntMatrix.from_triplet_text(text, 2, 3).to_dense() == m.to_dense()


matrices = st.integers(1, 6).flatmap(lambda m: st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n),
                       min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_against_sympy(rows):
    factors, r = smith_normal_form(rows)
    assert factors == sympy_invariant_factors(rows)
    assert r == modp_rank(rows, 1_000_003)


@settings(max_examples=50, deadline=None)
@given(matrices, st.integers(2, 5))
def test_scaling(rows, g):
    factors, _ = smith_normal_form(rows)
    assert smith_normal_form([[g * x for x in r] for r in rows])[0] == [g * f for f in factors]


def test_matmul_and_rank():
    a = IntMatrix.from_dense([[1, 2], [3, 4]])
    assert (a @ a).to_dense() == [[7, 10], [15, 22]]
    assert rank(a) == 2
