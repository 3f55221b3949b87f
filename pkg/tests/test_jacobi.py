import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conemid.jacobi import JacobiConvergenceError, jacobi_eigenvalues, jacobi_eigh


def random_symmetric(gen, n, scale=1.0):
    a = gen.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


def test_diagonal_matrix_is_its_own_spectrum():
    w, v = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
    assert np.allclose(w, [-1.0, 2.0, 3.0])
    # eigenvectors are signed permutation columns
    assert np.allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_matches_numpy_eigh(rng):
    for n in (1, 2, 3, 5, 8, 13):
        a = random_symmetric(rng, n, scale=rng.uniform(0.5, 4.0))
        w, v = jacobi_eigh(a)
        w_np = np.linalg.eigvalsh(a)
        assert np.allclose(w, w_np, atol=1e-10 * max(1.0, np.abs(w_np).max()))
        # residual and orthogonality
        assert np.allclose(a @ v, v @ np.diag(w), atol=1e-9 * max(1.0, np.abs(w).max()))
        assert np.allclose(v.T @ v, np.eye(n), atol=1e-10)


def test_eigenvalues_only_path_agrees(rng):
    a = random_symmetric(rng, 6)
    w = jacobi_eigenvalues(a)
    w_full, _ = jacobi_eigh(a)
    assert np.allclose(w, w_full)


def test_near_degenerate_pair(rng):
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    a = q @ np.diag([1.0, 1.0 + 1e-13, 5.0, -2.0]) @ q.T
    w, v = jacobi_eigh(a)
    assert np.allclose(np.sort(w), [-2.0, 1.0, 1.0 + 1e-13, 5.0], atol=1e-9)
    assert np.allclose(v.T @ v, np.eye(4), atol=1e-10)


def test_zero_and_tiny_matrices():
    w, v = jacobi_eigh(np.zeros((3, 3)))
    assert np.all(w == 0.0) and np.allclose(v, np.eye(3))
    w1, v1 = jacobi_eigh(np.array([[7.0]]))
    assert w1[0] == 7.0 and v1[0, 0] == 1.0


@given(st.integers(min_value=2, max_value=7), st.integers(min_value=0, max_value=10_000))
def test_trace_and_frobenius_preserved(n, seed):
    gen = np.random.Generator(np.random.Philox(key=seed))
    a = random_symmetric(gen, n)
    w, _ = jacobi_eigh(a)
    assert abs(w.sum() - np.trace(a)) <= 1e-9 * max(1.0, abs(np.trace(a)))
    assert abs((w ** 2).sum() - (a ** 2).sum()) <= 1e-8 * max(1.0, (a ** 2).sum())


def test_rejects_non_square():
    with pytest.raises(ValueError):
        jacobi_eigh(np.zeros((2, 3)))
