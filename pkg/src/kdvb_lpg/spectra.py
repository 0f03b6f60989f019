"""Eigenvalues of the one-step amplification operator.

The matrices involved are small and dense, so a self-contained Hessenberg
reduction followed by a shifted QR iteration is used; library eigensolvers
serve only as an independent check in the test suite.
"""
from __future__ import annotations

import numpy as np

from .operators import build_step_matrices, operator_set

__all__ = ["hessenberg_reduce", "qr_eigvals", "amplification_matrix", "amplification_spectrum"]


def hessenberg_reduce(a: np.ndarray) -> np.ndarray:
    """Upper Hessenberg form of a real or complex square matrix by
    Householder similarity transforms."""
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError("matrix must be square")
    for k in range(n - 2):
        col = h[k + 1 :, k]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        v = col.copy()
        phase = v[0] / abs(v[0]) if v[0] != 0 else 1.0
        v[0] += phase * norm
        v /= np.linalg.norm(v)
        # apply P = I - 2 v v* from the left and right
        h[k + 1 :, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, k:])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        h[k + 2 :, k] = 0.0
    return h


def _wilkinson_shift(h: np.ndarray) -> complex:
    """Eigenvalue of the trailing 2x2 block closest to its bottom-right entry."""
    a, b = h[-2, -2], h[-2, -1]
    c, d = h[-1, -2], h[-1, -1]
    tr = a + d
    disc = np.sqrt((a - d) ** 2 / 4.0 + b * c + 0j)
    mid = tr / 2.0
    l1, l2 = mid + disc, mid - disc
    return l1 if abs(l1 - d) <= abs(l2 - d) else l2


def qr_eigvals(a: np.ndarray, tol: float = 1e-12, max_sweeps_per_eig: int = 30) -> np.ndarray:
    """All eigenvalues of a square matrix by shifted QR with deflation.

    Raises RuntimeError if the iteration fails to deflate within
    max_sweeps_per_eig * n total sweeps.
    """
    h = hessenberg_reduce(a)
    n = h.shape[0]
    eigs: list[complex] = []
    budget = max_sweeps_per_eig * n
    m = n
    sweeps = 0
    while m > 0:
        if m == 1:
            eigs.append(h[0, 0])
            m = 0
            continue
        # deflate any negligible subdiagonal entry in the active block
        offdiag = abs(h[m - 1, m - 2])
        scale = abs(h[m - 1, m - 1]) + abs(h[m - 2, m - 2])
        if offdiag <= tol * max(scale, 1.0):
            eigs.append(h[m - 1, m - 1])
            m -= 1
            continue
        if sweeps >= budget:
            raise RuntimeError(f"QR iteration failed to converge with {m} eigenvalues left")
        sweeps += 1
        mu = _wilkinson_shift(h[:m, :m])
        q, r = np.linalg.qr(h[:m, :m] - mu * np.eye(m))
        h[:m, :m] = r @ q + mu * np.eye(m)
    return np.array(eigs[::-1])


def amplification_matrix(
    N: int, dt: float, alpha_k: float, beta_k: float, matrix: str = "amplification"
) -> np.ndarray:
    """G = A^{-1} B governing error propagation over one step, or A itself."""
    sm = build_step_matrices(operator_set(N), dt, alpha_k, beta_k)
    if matrix == "step":
        return sm.A
    if matrix == "amplification":
        return np.linalg.solve(sm.A, sm.B)
    raise ValueError(f"unknown matrix choice {matrix!r}")


def amplification_spectrum(
    N: int, dt: float, alpha_k: float, beta_k: float, matrix: str = "amplification"
) -> np.ndarray:
    """Eigenvalues of the chosen per-step matrix, sorted by descending modulus."""
    eigs = qr_eigvals(amplification_matrix(N, dt, alpha_k, beta_k, matrix))
    return eigs[np.argsort(-np.abs(eigs))]
