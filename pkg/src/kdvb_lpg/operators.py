"""Assembly of the four scheme matrices and the per-step matrices.

Two routes exist for every operator: the closed-form entries tabulated in
`assemble_*`, and `oracle_matrix`, which integrates the defining bilinear
forms of the weak formulation with an exact Gauss rule. The solver always
consumes the oracle route; `verify_closed_forms` adjudicates the two and
reports any disagreement instead of silently patching the closed forms.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor

from .legendre import gauss_rule, legendre_deriv_table, legendre_table, phi_table

__all__ = [
    "OperatorSet",
    "StepMatrices",
    "DiscrepancyReport",
    "SingularOperatorError",
    "assemble_L",
    "assemble_Q",
    "assemble_K",
    "assemble_M",
    "oracle_matrix",
    "operator_set",
    "verify_closed_forms",
    "build_step_matrices",
    "dump_matrix_csv",
]


class SingularOperatorError(RuntimeError):
    """Raised when a step matrix is numerically singular."""


@dataclass(frozen=True)
class OperatorSet:
    """The four (N-2) x (N-2) scheme matrices, row m, column n, 0-based."""

    N: int
    K: np.ndarray
    M: np.ndarray
    Q: np.ndarray
    L: np.ndarray

    @property
    def dim(self) -> int:
        return self.N - 2


@dataclass(frozen=True)
class StepMatrices:
    """Per-step matrices: A u^{k+1} = B u^k + dt * load; C = dt * M."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    dt: float
    alpha_k: float
    beta_k: float


@dataclass
class DiscrepancyReport:
    """Entries where a closed form and the quadrature oracle disagree."""

    N: int
    tolerance: float
    entries: list[tuple[str, int, int, float, float, float]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.entries

    def matrices(self) -> set[str]:
        return {name for name, *_ in self.entries}

    def offsets(self, name: str) -> set[int]:
        """Band offsets n - m at which `name` deviates."""
        return {n - m for nm, m, n, *_ in self.entries if nm == name}


def _c(n: int) -> float:
    return 1.0 / (2 * n + 1)


def assemble_L(N: int) -> np.ndarray:
    """Diagonal Gram matrix of the L_{m+1}: entries 2/(2m+3)."""
    dim = N - 2
    return np.diag([2.0 * _c(m + 1) for m in range(dim)])


def assemble_Q(N: int) -> np.ndarray:
    """Upper-triangular dispersion coupling: c_{m+1}-1 on the diagonal,
    2(-1)^{m+n+1} above it, zero below."""
    dim = N - 2
    Q = np.zeros((dim, dim))
    for m in range(dim):
        Q[m, m] = _c(m + 1) - 1.0
        for n in range(m + 1, dim):
            Q[m, n] = 2.0 * (-1.0) ** (m + n + 1)
    return Q


def assemble_K(N: int) -> np.ndarray:
    """Tridiagonal dissipation matrix, closed-form entries as tabulated."""
    dim = N - 2
    K = np.zeros((dim, dim))
    for m in range(dim):
        K[m, m] = 2.0 * _c(m + 1)
        if m + 1 < dim:
            K[m, m + 1] = 2.0 * _c(m) - 2.0 * (m + 1) * _c(m) * _c(m + 1)
        if m - 1 >= 0:
            K[m, m - 1] = -2.0 * (1.0 + (m + 2) * _c(m + 1)) * _c(m + 2)
    return K


def assemble_M(N: int) -> np.ndarray:
    """Mass matrix ((1-x) phi_n, phi_m), bandwidth 3.

    Entries n = m..m+3 from the closed forms; n < m filled by symmetry of
    the bilinear form.
    """
    dim = N - 2
    M = np.zeros((dim, dim))
    for m in range(dim):
        M[m, m] = 2.0 * _c(m + 1) ** 2 * (_c(m) + _c(m + 2))
        if m + 1 < dim:
            M[m, m + 1] = -2.0 * _c(m + 1) * _c(m + 2) ** 2 * (_c(m) + (m + 3) * _c(m + 3))
        if m + 2 < dim:
            M[m, m + 2] = -2.0 * _c(m + 1) * _c(m + 2) * _c(m + 3)
        if m + 3 < dim:
            M[m, m + 3] = 2.0 * (m + 3) * _c(m + 1) * _c(m + 2) * _c(m + 3) * _c(m + 4)
    for m in range(dim):
        for n in range(m):
            M[m, n] = M[n, m]
    return M


def oracle_matrix(kind: str, N: int) -> np.ndarray:
    """Operator entries by exact Gauss quadrature of the weak-form integrands.

    kind L: (L_{n+1}, L_{m+1})
    kind Q: ((1-x) L_{m+1}, L'_{n+1})
    kind K: -(d^2/dx^2 [(1-x) phi_n], phi_m), the dissipation bilinear form
            acting on the trial function (1-x) phi_n
    kind M: ((1-x) phi_n, phi_m)

    With rule order 2N + 8 all integrands are integrated exactly.
    """
    if N < 3:
        raise ValueError("N must be >= 3")
    dim = N - 2
    rule = gauss_rule(2 * N + 8)
    x, w = rule.nodes, rule.weights
    L = legendre_table(N + 1, x)
    dL = legendre_deriv_table(N + 1, x)
    phi = phi_table(dim, x)

    if kind == "L":
        return np.array([[np.dot(w, L[n + 1] * L[m + 1]) for n in range(dim)] for m in range(dim)])
    if kind == "Q":
        return np.array(
            [[np.dot(w * (1.0 - x), L[m + 1] * dL[n + 1]) for n in range(dim)] for m in range(dim)]
        )
    if kind == "K":
        # second derivative of (1-x) phi_n is 2 L_{n+1} - (1-x) L'_{n+1}
        d2w = np.array([2.0 * L[n + 1] - (1.0 - x) * dL[n + 1] for n in range(dim)])
        return np.array([[-np.dot(w, d2w[n] * phi[m]) for n in range(dim)] for m in range(dim)])
    if kind == "M":
        return np.array(
            [[np.dot(w * (1.0 - x), phi[n] * phi[m]) for n in range(dim)] for m in range(dim)]
        )
    raise ValueError(f"unknown matrix kind {kind!r}")


def operator_set(N: int) -> OperatorSet:
    """Operators used by the solver: the oracle (weak form) route."""
    return OperatorSet(
        N=N,
        K=oracle_matrix("K", N),
        M=oracle_matrix("M", N),
        Q=oracle_matrix("Q", N),
        L=oracle_matrix("L", N),
    )


_ASSEMBLERS = {"L": assemble_L, "Q": assemble_Q, "K": assemble_K, "M": assemble_M}


def verify_closed_forms(N: int, tol: float = 1e-10) -> DiscrepancyReport:
    """Compare every closed-form entry against the quadrature oracle.

    Disagreements are reported, never patched: the solver path consumes the
    oracle matrices, so a logged discrepancy documents a defect in the
    tabulated closed forms without affecting computed solutions.
    """
    report = DiscrepancyReport(N=N, tolerance=tol)
    for name, fn in _ASSEMBLERS.items():
        closed = fn(N)
        oracle = oracle_matrix(name, N)
        diff = np.abs(closed - oracle)
        for m, n in zip(*np.nonzero(diff > tol)):
            report.entries.append(
                (name, int(m), int(n), float(closed[m, n]), float(oracle[m, n]), float(diff[m, n]))
            )
    return report


def build_step_matrices(
    ops: OperatorSet, dt: float, alpha_k: float, beta_k: float
) -> StepMatrices:
    """A, B, C for one time step with coefficient samples alpha_k, beta_k.

    Raises SingularOperatorError if A fails the LU pivot threshold.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    disp = dt * alpha_k * ops.L - 0.5 * dt * alpha_k * ops.Q
    diss = 0.5 * dt * beta_k * ops.K
    A = ops.M + disp + diss
    B = ops.M - disp - diss
    _check_invertible(A, ops.N, dt, alpha_k, beta_k)
    return StepMatrices(A=A, B=B, C=dt * ops.M, dt=dt, alpha_k=alpha_k, beta_k=beta_k)


def _check_invertible(A: np.ndarray, N: int, dt: float, alpha_k: float, beta_k: float):
    with warnings.catch_warnings():
        # the pivot check below is the diagnostic; the factorization's own
        # singular-matrix warning would be redundant noise
        warnings.simplefilter("ignore")
        lu, _ = lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= 1e-13 * np.abs(A).max():
        raise SingularOperatorError(
            f"singular step matrix: N={N}, dt={dt}, alpha={alpha_k}, beta={beta_k}"
        )


def dump_matrix_csv(matrix: np.ndarray, path: str):
    """Debug dump as (row, col, value) triples."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["row", "col", "value"])
        for m in range(matrix.shape[0]):
            for n in range(matrix.shape[1]):
                writer.writerow([m, n, repr(matrix[m, n])])
