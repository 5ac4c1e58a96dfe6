from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from looprate import numerics as nm
from looprate.errors import IndexOutOfRange, NonSquare, Singular


def ex(rows):
    return nm.exact_matrix(rows)


def test_determinant_small_cases():
    assert nm.determinant(ex([[1]])) == 1
    assert nm.determinant(ex([[2, -1], [-1, 2]])) == 3
    assert nm.determinant(np.array([[2.0, -1.0], [-1.0, 2.0]])) == pytest.approx(3.0)


def test_determinant_weighted_k3_reduced_laplacian():
    a, b, c = F(2), F(3, 2), F(5)  # w12, w23, w13
    L = ex([[a + c, -a], [-a, a + b]])
    assert nm.determinant(L) == a * b + a * c + b * c


def test_empty_determinant_is_one():
    M = ex([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    empty = nm.submatrix_minor(M, [0, 1, 2], [0, 1, 2])
    assert nm.shape(empty) == (0, 0)
    assert nm.determinant(empty) == 1


def test_non_square():
    with pytest.raises(NonSquare):
        nm.determinant(ex([[1, 2]]))
    with pytest.raises(NonSquare):
        nm.solve(ex([[1, 2]]), [1])


def test_solve_examples():
    assert nm.solve(ex([[1, 0], [0, 1]]), [F(3), F(-2)]) == [3, -2]
    assert nm.solve(ex([[2, -1], [-1, 2]]), [1, 0]) == [F(2, 3), F(1, 3)]
    x = nm.solve(np.array([[2.0, -1.0], [-1.0, 2.0]]), [1.0, 0.0])
    assert np.allclose(x, [2 / 3, 1 / 3])


def test_solve_singular():
    with pytest.raises(Singular):
        nm.solve(ex([[1, 1], [1, 1]]), [1, 0])
    with pytest.raises(Singular):
        nm.solve(np.array([[1.0, 1.0], [1.0, 1.0]]), [1.0, 0.0])


def test_submatrix_minor():
    M = ex([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert nm.submatrix_minor(M) == M
    assert nm.submatrix_minor(M, [2], [2]) == ex([[1, 2], [4, 5]])
    with pytest.raises(IndexOutOfRange):
        nm.submatrix_minor(M, [3], [])


def test_exact_rejects_floats():
    with pytest.raises(TypeError):
        nm.exact_matrix([[1.5]])


def test_inverse_exact():
    M = ex([[4, 1], [2, 3]])
    inv = nm.inverse(M)
    assert inv == [[F(3, 10), F(-1, 10)], [F(-1, 5), F(2, 5)]]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_exact_and_float_determinants_agree(seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-5, 6, size=(10, 10)) + 12 * np.eye(10, dtype=int)
    exact = nm.determinant(ex(A.tolist()))
    approx = nm.determinant(A.astype(float))
    assert abs(float(exact) - approx) <= 1e-8 * abs(float(exact))


def test_pcg_matches_direct_solve():
    rng = np.random.default_rng(3)
    B = rng.normal(size=(30, 30))
    A = B @ B.T + 30 * np.eye(30)
    b = rng.normal(size=30)
    assert np.allclose(nm.pcg(A, b, tol=1e-12), np.linalg.solve(A, b))
