"""Benchmark experiments: convergence studies, parameter sweeps, bounded
time-varying case studies, and modal diagnostics.

All experiments integrate the manufactured benchmark with the fast stepping
kernel: the time-harmonic structure of the source and exact solution turns
the per-step load and nodal error into combinations of vectors precomputed
once per resolution.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernel
from .errors import ConvergenceTable, SweepGrid, to_decibels
from .legendre import cgl_points, phi_table
from .manufactured import ManufacturedProblem
from .profiles import CoefficientProfile, case_profiles
from .solver import SolverConfig, discretization, run, source_modal_vector

__all__ = [
    "manufactured_errors",
    "temporal_convergence_study",
    "spatial_convergence_study",
    "sweep_beta_dt",
    "sweep_alpha_beta",
    "bounded_case_study",
    "BoundedCaseReport",
    "modal_spectrum_diagnostics",
    "ModalDiagnostics",
    "BETA_DT_BETAS",
    "BETA_DT_DTS",
    "ALPHA_BETA_BETAS",
    "ALPHA_BETA_ALPHAS",
]

# sweep axes: 20 dissipation values from 0 in steps of 4e-2 crossed with
# 20 time steps from 2e-4 in steps of 1e-4, and 20 x 20 (alpha, beta) values
BETA_DT_BETAS = tuple((i - 1) * 4e-2 for i in range(1, 21))
BETA_DT_DTS = tuple((i + 1) * 1e-4 for i in range(1, 21))
ALPHA_BETA_BETAS = tuple((i - 1) * 3.25e-2 for i in range(1, 21))
ALPHA_BETA_ALPHAS = tuple(0.2 + i * 0.0475 for i in range(1, 21))  # (0.2, 1.15]


@lru_cache(maxsize=16)
def _bench_tables(N: int, a: float, b: float, c: float):
    """Per-resolution precomputation for the fast kernel."""
    problem = ManufacturedProblem(a=a, b=b, c=c)
    d = discretization(N, max(2 * N, 64))
    xq = d.rule.nodes
    S1 = d.ops.L - 0.5 * d.ops.Q
    S2 = 0.5 * d.ops.K
    bc = np.empty((3, d.dim))
    bs = np.empty((3, d.dim))
    comps = problem.source_node_components(xq)
    for i in range(3):
        bc[i] = d.phiw @ comps[i]
        bs[i] = d.phiw @ comps[3 + i]
    pts = cgl_points(N)
    # trial functions (1-x) phi_n at the error evaluation points
    phi_pts = (1.0 - pts) * phi_table(d.dim, pts)
    uc, us = problem.exact_node_components(pts)
    u0 = d.solve_mass(d.phiw @ problem.initial(xq))
    diff0 = np.abs(u0 @ phi_pts - problem.exact(pts, 0.0))
    term0 = (float(diff0.sum()), float(np.sqrt(np.dot(diff0, diff0))))
    return d.ops.M, S1, S2, bc, bs, phi_pts, uc, us, u0, term0, problem


def _as_profile(value) -> CoefficientProfile:
    if isinstance(value, CoefficientProfile):
        return value
    return CoefficientProfile.constant(float(value))


def manufactured_errors(
    N: int,
    dt: float,
    T: float,
    alpha,
    beta,
    problem: ManufacturedProblem | None = None,
    backend: str | None = None,
) -> dict:
    """Run the benchmark and return the errors in both nodal norms.

    Returns a dict with keys eps_l1l1, eps_l1l2, db_l1l1, db_l1l2, n_steps.
    T is rounded to the nearest multiple of dt.
    """
    problem = problem if problem is not None else ManufacturedProblem()
    alpha = _as_profile(alpha)
    beta = _as_profile(beta)
    nT = int(round(T / dt))
    if nT < 1:
        raise ValueError("T must cover at least one step")
    M, S1, S2, bc, bs, phi_pts, uc, us, u0, term0, _ = _bench_tables(
        N, problem.a, problem.b, problem.c
    )
    ts = np.arange(nT + 1) * dt
    alphas = np.array([float(alpha.evaluate(t)) for t in ts])
    betas = np.array([float(beta.evaluate(t)) for t in ts])
    s1, s2, _ = _kernel.run_manufactured(
        M, S1, S2, dt, alphas, betas, u0, bc, bs, problem.c, phi_pts, uc, us, backend=backend
    )
    eps1 = (dt / N) * (term0[0] + s1)
    eps2 = (dt / N) * (term0[1] + s2)
    return {
        "eps_l1l1": eps1,
        "eps_l1l2": eps2,
        "db_l1l1": to_decibels(eps1),
        "db_l1l2": to_decibels(eps2),
        "n_steps": nT,
    }


def _cell(args) -> tuple:
    """One independent sweep run, keyed by its grid coordinates."""
    (i, j), kwargs = args
    res = manufactured_errors(**kwargs)
    return (i, j), res["eps_l1l2"]


def _run_cells(jobs: list, workers: int) -> dict:
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return dict(pool.map(_cell, jobs))
    return dict(map(_cell, jobs))


def temporal_convergence_study(
    betas=(0.0, 0.2, 0.4, 0.6, 0.8),
    dts=tuple((i + 1) * 1e-4 for i in range(1, 21)),
    N: int = 32,
    T: float = 2.0,
    alpha: float = 1.0,
) -> dict[float, ConvergenceTable]:
    """Error against time step per dissipation value; fixed resolution."""
    tables: dict[float, ConvergenceTable] = {}
    for b in betas:
        tab = ConvergenceTable(parameter="dt", metadata={"N": N, "T": T, "alpha": alpha, "beta": b})
        for dt in dts:
            res = manufactured_errors(N, dt, T, alpha, b)
            tab.add(dt, res["eps_l1l1"], res["eps_l1l2"])
        tables[b] = tab
    return tables


def spatial_convergence_study(
    betas=(0.0, 0.2, 0.4, 0.6, 0.8),
    n_values=tuple(range(14, 28, 2)),
    dt: float = 1e-4,
    T: float = 2.0,
    alpha: float = 1.0,
) -> dict[float, ConvergenceTable]:
    """Error against trial degree per dissipation value; fixed time step."""
    tables: dict[float, ConvergenceTable] = {}
    for b in betas:
        tab = ConvergenceTable(parameter="N", metadata={"dt": dt, "T": T, "alpha": alpha, "beta": b})
        for N in n_values:
            res = manufactured_errors(N, dt, T, alpha, b)
            tab.add(N, res["eps_l1l1"], res["eps_l1l2"])
        tables[b] = tab
    return tables


def sweep_beta_dt(
    N: int = 32, T: float = 2.0, alpha: float = 1.0, workers: int = 1
) -> SweepGrid:
    """20 x 20 (beta, dt) error grid at fixed dispersion."""
    betas, dts = BETA_DT_BETAS, BETA_DT_DTS
    jobs = [
        ((i, j), dict(N=N, dt=dt, T=T, alpha=alpha, beta=b))
        for i, b in enumerate(betas)
        for j, dt in enumerate(dts)
    ]
    cells = _run_cells(jobs, workers)
    eps = np.array([[cells[(i, j)] for j in range(len(dts))] for i in range(len(betas))])
    return SweepGrid(
        x_name="beta",
        y_name="dt",
        x_values=np.array(betas),
        y_values=np.array(dts),
        eps=eps,
        metadata={"N": N, "T": T, "alpha": alpha},
    )


def sweep_alpha_beta(dt: float, N: int = 32, T: float = 2.0, workers: int = 1) -> SweepGrid:
    """20 x 20 (alpha, beta) error grid at a fixed time step."""
    alphas, betas = ALPHA_BETA_ALPHAS, ALPHA_BETA_BETAS
    jobs = [
        ((i, j), dict(N=N, dt=dt, T=T, alpha=a, beta=b))
        for i, a in enumerate(alphas)
        for j, b in enumerate(betas)
    ]
    cells = _run_cells(jobs, workers)
    eps = np.array([[cells[(i, j)] for j in range(len(betas))] for i in range(len(alphas))])
    return SweepGrid(
        x_name="alpha",
        y_name="beta",
        x_values=np.array(alphas),
        y_values=np.array(betas),
        eps=eps,
        metadata={"N": N, "T": T, "dt": dt},
    )


@dataclass
class BoundedCaseReport:
    """Time-varying run bracketed by constant-coefficient bounding runs."""

    case: int
    rows: list[dict] = field(default_factory=list)

    @property
    def all_contained(self) -> bool:
        return all(r["contained"] for r in self.rows)


# constant (alpha, beta) pairs whose errors bracket each time-varying case
_CASE_BOUNDS = {
    1: {"max": (5.0 / np.sqrt(2.0), np.sqrt(2.0)), "min": (5.0, 1.0)},
    2: {"max": (1.0, 0.5), "min": (4.0, 0.25)},
}


def bounded_case_study(
    case: int, dts=(1e-2, 1e-3, 1e-4), N: int = 32, T: float = 1.0
) -> BoundedCaseReport:
    """Error of a time-varying run against its constant-coefficient bounds."""
    if case not in _CASE_BOUNDS:
        raise ValueError("case must be 1 or 2")
    alpha, beta = case_profiles(case)
    bounds = _CASE_BOUNDS[case]
    report = BoundedCaseReport(case=case)
    for dt in dts:
        eps = manufactured_errors(N, dt, T, alpha, beta)["eps_l1l2"]
        a_mx, b_mx = bounds["max"]
        a_mn, b_mn = bounds["min"]
        eps_max = manufactured_errors(N, dt, T, a_mx, b_mx)["eps_l1l2"]
        eps_min = manufactured_errors(N, dt, T, a_mn, b_mn)["eps_l1l2"]
        report.rows.append(
            {
                "dt": dt,
                "eps": eps,
                "eps_min": eps_min,
                "eps_max": eps_max,
                "contained": eps_min <= eps <= eps_max,
            }
        )
    return report


@dataclass
class ModalDiagnostics:
    """Modal magnitude series at one snapshot of a benchmark run."""

    N: int
    k: int
    series: dict[str, np.ndarray]

    def top_fraction(self, tag: str, top: int = 5) -> float:
        """Energy fraction carried by the `top` highest modes of a series."""
        v = self.series[tag]
        e = v * v
        return float(e[-top:].sum() / e.sum())

    def tail_fraction(self, tag: str, mode: int = 22) -> float:
        """Energy fraction beyond the given mode index."""
        v = self.series[tag]
        e = v * v
        return float(e[mode + 1 :].sum() / e.sum()) if len(e) > mode + 1 else 0.0


def modal_spectrum_diagnostics(
    N: int,
    k: int = 1000,
    dt: float = 1e-5,
    alpha: float = 1.0,
    beta: float = 0.3,
    problem: ManufacturedProblem | None = None,
) -> ModalDiagnostics:
    """Modal magnitudes of the numerical solution, the projected exact
    solution, the initial datum, and the projected per-step source at
    snapshot index k."""
    problem = problem if problem is not None else ManufacturedProblem()
    cfg = SolverConfig(
        N=N,
        dt=dt,
        T=(k + 1) * dt,
        alpha=CoefficientProfile.constant(alpha),
        beta=CoefficientProfile.constant(beta),
        source=problem.source_function(
            CoefficientProfile.constant(alpha), CoefficientProfile.constant(beta)
        ),
        u0=problem.initial,
    )
    traj = run(cfg)
    d = discretization(cfg.N, cfg.q)
    t_snap = (k + 1) * dt
    exact_modal = d.solve_mass(d.phiw @ problem.exact(d.rule.nodes, t_snap))
    f_modal = source_modal_vector(cfg.source, k * dt, (k + 1) * dt, cfg)
    series = {
        "solution": np.abs(traj[k + 1].coeffs),
        "exact": np.abs(exact_modal),
        "initial": np.abs(traj[0].coeffs),
        "source": np.abs(dt * (d.ops.M @ f_modal)),
    }
    return ModalDiagnostics(N=N, k=k, series=series)
