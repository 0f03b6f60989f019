"""Discrete error metric, decibel conversion, order fitting and sweep tables."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .legendre import cgl_points
from .solver import SolverConfig, Trajectory, nodal_values

__all__ = [
    "ErrorReport",
    "epsilon_error",
    "to_decibels",
    "fit_order",
    "fitted_error_at",
    "ConvergenceTable",
    "SweepGrid",
]


@dataclass(frozen=True)
class ErrorReport:
    """Time-accumulated nodal error and its decibel form."""

    eps: float
    p: float
    db: float
    metadata: dict = field(default_factory=dict)


def epsilon_error(traj: Trajectory, exact, cfg: SolverConfig | None = None) -> ErrorReport:
    """eps = (dt / N) * sum_{k=0..T/dt} ( sum_j |u_N(x_j, t_k) - u(x_j, t_k)|^p )^{1/p}

    with the N+1 Chebyshev-Gauss-Lobatto points x_j; `exact` is the
    reference solution u(x, t). The inner node sum carries no 1/N factor
    inside the p-th root.
    """
    cfg = cfg if cfg is not None else traj.cfg
    pts = cgl_points(cfg.N)
    total = 0.0
    for st in traj.states:
        t = st.k * cfg.dt
        diff = np.abs(nodal_values(st, pts, cfg.N) - np.asarray(exact(pts, t), dtype=float))
        total += float(np.sum(diff**cfg.p)) ** (1.0 / cfg.p)
    eps = (cfg.dt / cfg.N) * total
    db = to_decibels(eps) if eps > 0 else float("-inf")
    return ErrorReport(eps=eps, p=cfg.p, db=db, metadata={"N": cfg.N, "dt": cfg.dt, "T": cfg.T})


def to_decibels(eps: float) -> float:
    """20 log10(eps); the error value must be positive."""
    if eps <= 0:
        raise ValueError("error must be positive for a decibel value")
    return 20.0 * float(np.log10(eps))


def fit_order(pairs) -> tuple[float, float]:
    """(order, intercept) of the least-squares fit log e = order*log h + intercept.

    `pairs` is a sequence of positive (h, error) tuples with at least two
    distinct h values; two points give the exact two-point slope.
    """
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("order fit needs at least two (h, error) pairs")
    h = np.array([float(a) for a, _ in pairs])
    e = np.array([float(b) for _, b in pairs])
    if np.any(h <= 0) or np.any(e <= 0):
        raise ValueError("order fit requires positive values")
    if np.unique(h).size < 2:
        raise ValueError("order fit requires at least two distinct h values")
    slope, intercept = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope), float(intercept)


def fitted_error_at(pairs, h: float) -> float:
    """Fitted error value exp(intercept) * h^order; used to report the
    power-law extrapolation at the smallest swept step."""
    order, intercept = fit_order(pairs)
    return float(np.exp(intercept) * h**order)


@dataclass
class ConvergenceTable:
    """Rows (swept value, error in L1(L1), error in L1(L2)), sorted by the
    swept parameter, with least-squares orders per error column."""

    parameter: str
    rows: list[tuple[float, float, float]] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, value: float, eps_l1l1: float, eps_l1l2: float):
        self.rows.append((float(value), float(eps_l1l1), float(eps_l1l2)))
        self.rows.sort(key=lambda r: r[0])

    def values(self) -> list[float]:
        return [v for v, _, _ in self.rows]

    def errors(self, p: int) -> list[float]:
        if p not in (1, 2):
            raise ValueError("p must be 1 or 2")
        return [r[p] for r in self.rows]

    def order(self, p: int) -> float:
        slope, _ = fit_order(list(zip(self.values(), self.errors(p))))
        return slope

    def export_csv(self, path: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([self.parameter, "eps_l1l1", "eps_l1l2"])
            for v, e1, e2 in self.rows:
                w.writerow([repr(v), repr(e1), repr(e2)])

    def export_json(self, path: str):
        payload = {
            "parameter": self.parameter,
            "rows": self.rows,
            "order_l1l1": self.order(1) if len(self.rows) >= 2 else None,
            "order_l1l2": self.order(2) if len(self.rows) >= 2 else None,
            "metadata": self.metadata,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)


@dataclass
class SweepGrid:
    """Error values over a two-parameter grid; cell [i, j] pairs
    x_values[i] with y_values[j] and comes from an independent run."""

    x_name: str
    y_name: str
    x_values: np.ndarray
    y_values: np.ndarray
    eps: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x_values = np.asarray(self.x_values, dtype=float)
        self.y_values = np.asarray(self.y_values, dtype=float)
        self.eps = np.asarray(self.eps, dtype=float)
        if self.eps.shape != (self.x_values.size, self.y_values.size):
            raise ValueError("eps grid shape inconsistent with axis lengths")

    @property
    def db(self) -> np.ndarray:
        return 20.0 * np.log10(self.eps)

    def export_csv(self, path: str):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([self.x_name, self.y_name, "eps", "eps_db"])
            db = self.db
            for i, xv in enumerate(self.x_values):
                for j, yv in enumerate(self.y_values):
                    w.writerow(
                        [repr(float(xv)), repr(float(yv)), repr(float(self.eps[i, j])), repr(float(db[i, j]))]
                    )

    def export_json(self, path: str):
        payload = {
            "x_name": self.x_name,
            "y_name": self.y_name,
            "x_values": self.x_values.tolist(),
            "y_values": self.y_values.tolist(),
            "eps": self.eps.tolist(),
            "db": self.db.tolist(),
            "metadata": self.metadata,
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
