"""Time integration of the fully discrete scheme.

One step solves A u^{k+1} = B u^k + dt * load with A, B built from the
coefficient samples at t_k and the load from the time-averaged source.
A run is sequential; distinct runs share only immutable operator sets and
may execute concurrently.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .legendre import (
    QuadratureRule,
    cgl_points,
    default_quad_order,
    gauss_rule,
    legendre_deriv2_table,
    legendre_deriv_table,
    legendre_table,
    phi_table,
)
from .operators import OperatorSet, SingularOperatorError, build_step_matrices, operator_set
from .profiles import CoefficientProfile

__all__ = [
    "SolverConfig",
    "ModalState",
    "Trajectory",
    "Discretization",
    "discretization",
    "project_initial",
    "source_load_vector",
    "source_modal_vector",
    "step",
    "run",
    "nodal_values",
    "stability_certificate",
    "hypothesis_H_check",
    "StabilityReport",
]


@dataclass(frozen=True)
class SolverConfig:
    N: int
    dt: float
    T: float
    alpha: CoefficientProfile
    beta: CoefficientProfile
    source: object = None
    u0: object = None
    p: float = 2.0
    quad_order: int | None = None

    def __post_init__(self):
        if self.N < 3:
            raise ValueError("N must be >= 3")
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.T < 0:
            raise ValueError("T must be nonnegative")
        if self.p < 1:
            raise ValueError("p must be >= 1")
        n = self.T / self.dt
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise ValueError(f"T/dt = {n} is not integral")

    @property
    def n_steps(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def q(self) -> int:
        return self.quad_order if self.quad_order is not None else default_quad_order(self.N)


@dataclass(frozen=True)
class ModalState:
    """Modal coefficients of u_N = (1-x) sum_n coeffs[n] phi_n at time index k."""

    coeffs: np.ndarray
    k: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite modal coefficients")
        object.__setattr__(self, "coeffs", c)


@dataclass
class Trajectory:
    states: list[ModalState]
    cfg: SolverConfig

    def __len__(self):
        return len(self.states)

    def __getitem__(self, k) -> ModalState:
        return self.states[k]

    def export_modal_csv(self, path: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "t", "mode", "coeff"])
            for st in self.states:
                t = st.k * self.cfg.dt
                for n, c in enumerate(st.coeffs):
                    w.writerow([st.k, repr(t), n, repr(c)])

    def export_nodal_csv(self, path: str, points: np.ndarray | None = None):
        pts = cgl_points(self.cfg.N) if points is None else np.asarray(points, dtype=float)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "t", "x", "u"])
            for st in self.states:
                t = st.k * self.cfg.dt
                vals = nodal_values(st, pts, self.cfg.N)
                for x, u in zip(pts, vals):
                    w.writerow([st.k, repr(t), repr(x), repr(u)])


class Discretization:
    """Cached per-(N, q) tables: quadrature rule, basis values, operators."""

    def __init__(self, N: int, q: int):
        self.N = N
        self.dim = N - 2
        self.rule: QuadratureRule = gauss_rule(q)
        x = self.rule.nodes
        self.L = legendre_table(N + 2, x)
        self.dL = legendre_deriv_table(N + 2, x)
        self.d2L = legendre_deriv2_table(N + 2, x)
        self.phi = phi_table(self.dim, x)
        self.phiw = self.phi * self.rule.weights
        self.trial = (1.0 - x) * self.phi  # (1-x) phi_n at quadrature nodes
        self.ops: OperatorSet = operator_set(N)
        self._lu_M = lu_factor(self.ops.M)

    def solve_mass(self, b: np.ndarray) -> np.ndarray:
        return lu_solve(self._lu_M, b)

    def trial_derivatives(self, coeffs: np.ndarray):
        """(u, u', u'', u''') of u = (1-x) sum coeffs[n] phi_n at the quadrature nodes."""
        x = self.rule.nodes
        n1 = np.arange(1, self.dim + 1)
        Ln1 = self.L[n1]
        dLn1 = self.dL[n1]
        d2Ln1 = self.d2L[n1]
        u = coeffs @ self.trial
        du = coeffs @ (-self.phi - (1.0 - x) * Ln1)
        d2u = coeffs @ (2.0 * Ln1 - (1.0 - x) * dLn1)
        d3u = coeffs @ (3.0 * dLn1 - (1.0 - x) * d2Ln1)
        return u, du, d2u, d3u


@lru_cache(maxsize=32)
def discretization(N: int, q: int) -> Discretization:
    return Discretization(N, q)


def _disc(cfg: SolverConfig) -> Discretization:
    return discretization(cfg.N, cfg.q)


def project_initial(u0, cfg: SolverConfig) -> ModalState:
    """Galerkin projection of the initial datum onto the trial space."""
    d = _disc(cfg)
    vals = np.asarray(u0(d.rule.nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite initial datum at a quadrature node")
    return ModalState(coeffs=d.solve_mass(d.phiw @ vals), k=0)


def source_load_vector(f, t_k: float, t_k1: float, cfg: SolverConfig) -> np.ndarray:
    """Load b_m = (f^{k+1/2}, phi_m) with f^{k+1/2} = (f(t_k) + f(t_{k+1})) / 2."""
    d = _disc(cfg)
    x = d.rule.nodes
    fmid = 0.5 * (np.asarray(f(x, t_k), dtype=float) + np.asarray(f(x, t_k1), dtype=float))
    if not np.all(np.isfinite(fmid)):
        raise ValueError("non-finite source value at a quadrature node")
    return d.phiw @ fmid


def source_modal_vector(f, t_k: float, t_k1: float, cfg: SolverConfig) -> np.ndarray:
    """Modal source F with M F = b; used by the modal-spectrum diagnostics."""
    d = _disc(cfg)
    return d.solve_mass(source_load_vector(f, t_k, t_k1, cfg))


def step(state: ModalState, cfg: SolverConfig, _cache: dict | None = None) -> ModalState:
    """Advance one step, sampling the coefficients at t_k."""
    if state.k >= cfg.n_steps:
        raise ValueError(f"state index {state.k} already at final time")
    d = _disc(cfg)
    t_k = state.k * cfg.dt
    a_k = float(cfg.alpha.evaluate(t_k))
    b_k = float(cfg.beta.evaluate(t_k))

    if a_k == 0.0 and b_k == 0.0:
        # A = B = M: the update reduces to u + dt M^{-1} load, and to the
        # identity when there is no source
        coeffs = state.coeffs
        if cfg.source is not None:
            coeffs = coeffs + cfg.dt * d.solve_mass(
                source_load_vector(cfg.source, t_k, t_k + cfg.dt, cfg)
            )
        return ModalState(coeffs=coeffs, k=state.k + 1)

    key = (a_k, b_k)
    if _cache is not None and _cache.get("key") == key:
        lu, B = _cache["lu"], _cache["B"]
    else:
        sm = build_step_matrices(d.ops, cfg.dt, a_k, b_k)
        lu = lu_factor(sm.A)
        B = sm.B
        if _cache is not None:
            _cache.update(key=key, lu=lu, B=B)

    rhs = B @ state.coeffs
    if cfg.source is not None:
        rhs = rhs + cfg.dt * source_load_vector(cfg.source, t_k, t_k + cfg.dt, cfg)
    sol = lu_solve(lu, rhs)
    if not np.all(np.isfinite(sol)):
        raise SingularOperatorError(
            f"non-finite solution at step {state.k}: N={cfg.N}, dt={cfg.dt}"
        )
    return ModalState(coeffs=sol, k=state.k + 1)


def run(cfg: SolverConfig) -> Trajectory:
    """Integrate from the projected initial datum to T; factorization of A
    is reused while the coefficient samples stay constant (within 1e-15)."""
    u0 = cfg.u0 if cfg.u0 is not None else (lambda x: np.zeros_like(x))
    states = [project_initial(u0, cfg)]
    cache: dict = {}
    for _ in range(cfg.n_steps):
        states.append(step(states[-1], cfg, _cache=cache))
    return Trajectory(states=states, cfg=cfg)


def nodal_values(state: ModalState, points, N: int) -> np.ndarray:
    """u_N(x_j) = (1 - x_j) sum_n coeffs[n] phi_n(x_j)."""
    pts = np.asarray(points, dtype=float)
    dim = len(state.coeffs)
    if N - 2 != dim:
        raise ValueError("state dimension inconsistent with N")
    phi = phi_table(dim, pts)
    return (1.0 - pts) * (state.coeffs @ phi)


def hypothesis_H_check(alpha_k: float, beta_k: float, eps1: float, eps2: float) -> bool:
    """Coefficient-balance inequality underpinning the convergence estimate:
    ((3/8 - eps1/16) alpha_k - (eps2/8 + 9/8) beta_k) > 0."""
    if eps1 <= 0 or eps2 <= 0:
        raise ValueError("eps1 and eps2 must be positive")
    return (0.375 - eps1 / 16.0) * alpha_k - (eps2 / 8.0 + 1.125) * beta_k > 0.0


@dataclass
class StabilityReport:
    lhs: float
    rhs: float
    ell: float
    margin: float
    holds: bool
    note: str = ""


def stability_certificate(cfg: SolverConfig, ell: float = 1.0) -> StabilityReport:
    """Numeric evaluation of the discrete energy inequality.

    Requires alpha(t_k) >= 1/(3 ell) and beta(t_k) >= 0 at every step.
    The dual norm of the source is replaced by the computable surrogate
    sup over the test space of (f, v)/||v'||, which under-estimates the true
    dual norm, so a negative margin is flagged rather than asserted.
    """
    if ell < 1.0:
        raise ValueError("ell must be >= 1")
    d = _disc(cfg)
    x, w = d.rule.nodes, d.rule.weights
    nT = cfg.n_steps
    tks = np.arange(nT) * cfg.dt
    alphas = np.array([float(cfg.alpha.evaluate(t)) for t in tks])
    betas = np.array([float(cfg.beta.evaluate(t)) for t in tks])
    if np.any(alphas < 1.0 / (3.0 * ell) - 1e-12):
        raise ValueError(f"hypothesis violated: min alpha {alphas.min()} < 1/(3*ell)")
    if np.any(betas < -1e-12):
        raise ValueError("hypothesis violated: beta must be nonnegative")

    traj = run(cfg)
    womega = w / (1.0 - x)  # weight (1-x)^{-1}

    def omega_norm2(coeffs):
        u = coeffs @ d.trial
        return float(np.dot(womega, u * u))

    lhs = omega_norm2(traj[nT].coeffs)
    rhs = 8.0 * ell * omega_norm2(traj[0].coeffs)
    # Gram of the test-space derivative phi_n' = -L_{n+1} is diagonal
    dual_diag = np.array([2.0 / (2 * n + 3) for n in range(d.dim)])
    for k in range(nT):
        mid = 0.5 * (traj[k].coeffs + traj[k + 1].coeffs)
        u, du, d2u, _ = d.trial_derivatives(mid)
        lhs += cfg.dt * (3.0 * ell * alphas[k] - 1.0) * float(np.dot(w, du * du))
        # u_N(-1) = 0 exactly for trial functions; the pointwise term vanishes
        diss = float(np.dot(womega, du * du)) - float(np.dot(w / (1.0 - x) ** 3, u * u))
        lhs += cfg.dt * betas[k] * diss
        if cfg.source is not None:
            b = source_load_vector(cfg.source, k * cfg.dt, (k + 1) * cfg.dt, cfg)
            rhs += 8.0 * cfg.dt * ell**2 * float(np.sum(b * b / dual_diag))
    margin = rhs - lhs
    note = "" if margin >= 0 else "negative margin: dual-norm surrogate is a lower bound"
    return StabilityReport(lhs=lhs, rhs=rhs, ell=ell, margin=margin, holds=margin >= 0, note=note)
