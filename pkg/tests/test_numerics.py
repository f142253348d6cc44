"""Unit tests for the dense linear-algebra contract layer."""

import numpy as np
import pytest

from gmimo import numerics


def _random_complex(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def test_hermitian_eig_recovers_constructed_spectrum():
    rng = np.random.default_rng(0)
    eigenvalues = np.array([5.0, 2.5, 2.5, -1.0, -3.0])
    q, _ = np.linalg.qr(_random_complex(rng, 5, 5))
    a = q @ np.diag(eigenvalues) @ q.conj().T
    a = (a + a.conj().T) / 2
    w, v = numerics.hermitian_eig(a)
    np.testing.assert_allclose(w, eigenvalues, atol=1e-12)
    np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-12)


def test_hermitian_eig_descending_and_unitary():
    rng = np.random.default_rng(1)
    m = _random_complex(rng, 12, 12)
    a = m + m.conj().T
    w, v = numerics.hermitian_eig(a)
    assert np.all(np.diff(w) <= 1e-12)
    np.testing.assert_allclose(v.conj().T @ v, np.eye(12), atol=1e-12)


def test_hermitian_eig_rejects_bad_input():
    with pytest.raises(ValueError):
        numerics.hermitian_eig(np.ones((2, 3)))
    with pytest.raises(ValueError):
        numerics.hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        numerics.hermitian_eig(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_svd_reconstructs_both_orientations():
    rng = np.random.default_rng(2)
    for rows, cols in [(6, 9), (9, 6), (7, 7)]:
        a = _random_complex(rng, rows, cols)
        u, s, v = numerics.svd(a)
        k = min(rows, cols)
        assert u.shape == (rows, k) and v.shape == (cols, k)
        assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
        np.testing.assert_allclose(u @ np.diag(s) @ v.conj().T, a, atol=1e-12)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(k), atol=1e-12)
        np.testing.assert_allclose(v.conj().T @ v, np.eye(k), atol=1e-12)


def test_null_space_of_constructed_rank_deficient_matrix():
    rng = np.random.default_rng(3)
    rank = 4
    a = _random_complex(rng, 6, rank) @ _random_complex(rng, rank, 10)
    basis = numerics.null_space(a)
    assert basis.shape == (10, 10 - rank)
    np.testing.assert_allclose(a @ basis, 0.0, atol=1e-10)
    np.testing.assert_allclose(
        basis.conj().T @ basis, np.eye(10 - rank), atol=1e-12
    )


def test_null_space_edge_cases():
    rng = np.random.default_rng(4)
    square = _random_complex(rng, 5, 5)
    assert numerics.null_space(square).shape == (5, 0)
    empty = np.zeros((0, 4))
    np.testing.assert_allclose(numerics.null_space(empty), np.eye(4))
    with pytest.raises(ValueError):
        numerics.null_space(square, tol=0.0)


def test_tiny_singular_values_count_as_rank_deficiency():
    rng = np.random.default_rng(5)
    q1, _ = np.linalg.qr(_random_complex(rng, 6, 6))
    q2, _ = np.linalg.qr(_random_complex(rng, 6, 6))
    s = np.array([3.0, 1.0, 0.5, 0.1, 1e-14, 1e-15])
    a = q1 @ np.diag(s) @ q2.conj().T
    assert numerics.null_space(a).shape == (6, 2)
    tol = numerics.default_rank_tolerance(a)
    assert 1e-14 < tol < 1e-8
