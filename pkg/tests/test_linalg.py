from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from eisensign.errors import NotInSpaceError, UnderdeterminedError
from eisensign.linalg import rank, solve

entry = st.integers(-6, 6)


@st.composite
def matrices(draw, rows=None, cols=None):
    m = rows or draw(st.integers(1, 6))
    n = cols or draw(st.integers(1, 6))
    return [[draw(entry) for _ in range(n)] for _ in range(m)]


@given(matrices())
def test_rank_matches_sympy(A):
    assert rank(A) == sympy.Matrix(A).rank()


@settings(max_examples=80)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(matrices(n + 2, n), st.lists(entry, min_size=n, max_size=n))))
def test_solve_recovers_planted_solution(case):
    A, x = case
    b = [sum(a * v for a, v in zip(row, x)) for row in A]
    if sympy.Matrix(A).rank() < len(x):
        with pytest.raises(UnderdeterminedError):
            solve(A, b)
    else:
        assert solve(A, b).x == tuple(Fraction(v) for v in x)


def test_inconsistent_system():
    with pytest.raises(NotInSpaceError):
        solve([[1, 0], [0, 1], [1, 1]], [1, 1, 3])


def test_fraction_entries():
    sol = solve([[Fraction(1, 2), 1], [1, Fraction(-1, 3)]], [1, 0])
    assert sol.x == (Fraction(2, 7), Fraction(6, 7)) and sol.rank == 2
