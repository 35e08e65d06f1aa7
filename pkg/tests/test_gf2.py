import numpy as np
import pytest

from polarsym import gf2


def test_identity():
    b = np.array([1, 0, 1], dtype=np.uint8)
    assert np.array_equal(gf2.solve(np.eye(3, dtype=np.uint8), b), b)


def test_random_invertible_round_trip(rng):
    for _ in range(50):
        m = int(rng.integers(1, 12))
        while True:
            A = rng.integers(0, 2, (m, m), dtype=np.uint8)
            try:
                gf2.solve(A, np.zeros(m, dtype=np.uint8))
                break
            except gf2.SingularMatrixError:
                continue
        x = rng.integers(0, 2, m, dtype=np.uint8)
        b = (A @ x) % 2
        assert np.array_equal(gf2.solve(A, b), x)


def test_rectangular_consistent():
    A = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    x = np.array([1, 1], dtype=np.uint8)
    assert np.array_equal(gf2.solve(A, (A @ x) % 2), x)


def test_inconsistent_raises():
    A = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    with pytest.raises(gf2.SingularMatrixError):
        gf2.solve(A, np.array([1, 1, 1], dtype=np.uint8))


def test_dependent_columns_raise():
    A = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    with pytest.raises(gf2.SingularMatrixError):
        gf2.solve(A, np.array([0, 0], dtype=np.uint8))


def test_shape_validation():
    with pytest.raises(ValueError):
        gf2.solve(np.zeros((2, 3), dtype=np.uint8), np.zeros(2, dtype=np.uint8))
    with pytest.raises(ValueError):
        gf2.solve(np.zeros((2, 2), dtype=np.uint8), np.zeros(3, dtype=np.uint8))
