from fractions import Fraction

import pytest

from src.errors import ComputationError, DimensionMismatchError
from src.linalg import (
    bareiss_determinant,
    bareiss_solve,
    leading_principal_minors,
    rational_nullspace,
    rational_rank,
)


def test_bareiss_determinant_small():
    assert bareiss_determinant([[2, 1], [1, 1]]) == 1
    assert bareiss_determinant([[0, 1], [1, 0]]) == -1
    assert bareiss_determinant([[1, 2], [2, 4]]) == 0
    assert bareiss_determinant([]) == 1


def test_bareiss_determinant_fractions():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert bareiss_determinant(m) == Fraction(1, 10) - Fraction(1, 12)


def test_bareiss_solve_exact():
    x = bareiss_solve([[6, 2], [2, 1]], [2, 1])
    assert x == [Fraction(0), Fraction(1)]
    x = bareiss_solve([[0, 1], [1, 0]], [3, 5])
    assert x == [5, 3]


def test_bareiss_solve_singular():
    with pytest.raises(ComputationError):
        bareiss_solve([[1, 2], [2, 4]], [1, 1])


def test_non_square_rejected():
    with pytest.raises(DimensionMismatchError):
        bareiss_determinant([[1, 2, 3], [4, 5, 6]])


def test_leading_principal_minors():
    assert leading_principal_minors([[2, 1], [1, 2]]) == [2, 3]


def test_rank_and_nullspace():
    m = [[1, 2, 3], [2, 4, 6]]
    assert rational_rank(m) == 1
    basis = rational_nullspace(m)
    assert len(basis) == 2
    for v in basis:
        assert sum(a * b for a, b in zip(m[0], v)) == 0
    assert rational_nullspace([], cols=2) == [[1, 0], [0, 1]]
