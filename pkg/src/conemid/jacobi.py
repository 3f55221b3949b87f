"""Cyclic Jacobi eigensolver for dense real symmetric matrices.

The rest of the package needs full eigensystems of small symmetric
matrices (order <= ~40) with reliably orthogonal eigenvectors.  A
rotation-based solver is accurate and predictable at that scale, and it
keeps the spectral engine free of external linear-algebra routines so the
test suite can cross-check it against an independent implementation.
"""

from __future__ import annotations

import numpy as np

__all__ = ["JacobiConvergenceError", "jacobi_eigh", "jacobi_eigenvalues"]

# Sweep budget: convergence is quadratic once rotations settle, and well
# under ten sweeps in practice for the matrix orders used here.
_MAX_SWEEPS = 64
_OFF_TOL = 1e-14


class JacobiConvergenceError(RuntimeError):
    """Raised when the rotation sweeps fail to reach the target off-norm."""


def _off_norm(a: np.ndarray) -> float:
    lower = np.tril(a, -1)
    return float(np.sqrt(2.0 * np.sum(lower * lower)))


def _sweep(a: np.ndarray, v: np.ndarray | None) -> None:
    """One cyclic sweep of (p, q) rotations, updating a (and v) in place."""
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            if abs(apq) <= 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                # below representable influence on the diagonal
                a[p, q] = a[q, p] = 0.0
                continue
            theta = 0.5 * (a[q, q] - a[p, p]) / apq
            if theta >= 0.0:
                t = 1.0 / (theta + np.hypot(theta, 1.0))
            else:
                t = -1.0 / (-theta + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            col_p = a[:, p].copy()
            col_q = a[:, q].copy()
            a[:, p] = c * col_p - s * col_q
            a[:, q] = s * col_p + c * col_q
            row_p = a[p, :].copy()
            row_q = a[q, :].copy()
            a[p, :] = c * row_p - s * row_q
            a[q, :] = s * row_p + c * row_q
            a[p, q] = a[q, p] = 0.0

            if v is not None:
                v_p = v[:, p].copy()
                v_q = v[:, q].copy()
                v[:, p] = c * v_p - s * v_q
                v[:, q] = s * v_p + c * v_q


def _run(matrix: np.ndarray, want_vectors: bool):
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(n) if want_vectors else None
    if n == 1:
        return np.array([a[0, 0]]), v

    fro = float(np.linalg.norm(a))
    if fro == 0.0:
        return np.zeros(n), v
    target = _OFF_TOL * fro

    for _ in range(_MAX_SWEEPS):
        if _off_norm(a) <= target:
            break
        _sweep(a, v)
    else:
        raise JacobiConvergenceError(
            f"off-diagonal norm did not reach {target:.3e} within "
            f"{_MAX_SWEEPS} sweeps (order {n})"
        )

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    if v is not None:
        v = v[:, order]
    return w[order], v


def jacobi_eigh(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalise a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and the columns of
    ``v`` orthonormal, so that ``matrix = v @ diag(w) @ v.T``.  Raises
    :class:`JacobiConvergenceError` if the off-diagonal mass has not
    dropped below ``1e-14 * ||matrix||_F`` within the sweep budget.
    """
    return _run(matrix, want_vectors=True)


def jacobi_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues only (ascending); skips eigenvector accumulation."""
    w, _ = _run(matrix, want_vectors=False)
    return w
