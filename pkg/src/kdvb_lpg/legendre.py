"""Legendre polynomials, the Petrov test basis, quadrature rules and
weighted inner products.

Everything downstream (operator assembly, time stepping, error metrics)
reduces to the evaluations and integrals provided here. All functions are
pure; `QuadratureRule` is immutable after construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "BasisSpec",
    "legendre_eval",
    "legendre_table",
    "legendre_deriv_eval",
    "legendre_deriv_table",
    "legendre_deriv2_table",
    "phi_eval",
    "phi_table",
    "gauss_rule",
    "cgl_points",
    "weighted_inner_product",
    "default_quad_order",
]

_DOMAIN_SLACK = 1e-14


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on (-1, 1): exact for polynomials of degree <= 2*order - 1."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nodes", np.asarray(self.nodes, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class BasisSpec:
    """Polynomial degree cap N and the derived mode count N - 2 (modes n = 0..N-3)."""

    N: int

    def __post_init__(self):
        if self.N < 3:
            raise ValueError(f"basis degree N must be >= 3, got {self.N}")

    @property
    def dim(self) -> int:
        return self.N - 2


def _check_domain(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + _DOMAIN_SLACK):
        raise ValueError("evaluation point outside [-1, 1]")
    return x


def legendre_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Values of L_0..L_nmax at points x, shape (nmax + 1, len(x)).

    Upward three-term (Bonnet) recurrence; stable on [-1, 1].
    """
    x = np.atleast_1d(_check_domain(x))
    out = np.empty((nmax + 1, x.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for k in range(2, nmax + 1):
        out[k] = ((2 * k - 1) * x * out[k - 1] - (k - 1) * out[k - 2]) / k
    return out


def legendre_eval(n: int, x) -> float | np.ndarray:
    """L_n(x) by the Bonnet recurrence; exact at the endpoints."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    scalar = np.isscalar(x)
    vals = legendre_table(n, x)[n]
    return float(vals[0]) if scalar else vals


def legendre_deriv_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Values of L'_0..L'_nmax via the summation identity
    L'_n = sum over k of (2k+1) L_k with k + n odd."""
    x = np.atleast_1d(_check_domain(x))
    L = legendre_table(max(nmax, 0), x)
    out = np.zeros((nmax + 1, x.size))
    # L'_{n} = L'_{n-2} + (2n - 1) L_{n-1}: rolls the odd-index sum forward
    for n in range(1, nmax + 1):
        out[n] = (out[n - 2] if n >= 2 else 0.0) + (2 * n - 1) * L[n - 1]
    return out


def legendre_deriv_eval(n: int, x) -> float | np.ndarray:
    """L'_n(x) by the summation identity over lower-degree polynomials."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    scalar = np.isscalar(x)
    vals = legendre_deriv_table(n, x)[n]
    return float(vals[0]) if scalar else vals


def legendre_deriv2_table(nmax: int, x: np.ndarray) -> np.ndarray:
    """Second derivatives L''_0..L''_nmax (summation identity applied twice)."""
    x = np.atleast_1d(_check_domain(x))
    dL = legendre_deriv_table(max(nmax, 0), x)
    out = np.zeros((nmax + 1, x.size))
    for n in range(2, nmax + 1):
        out[n] = (out[n - 2] if n >= 2 else 0.0) + (2 * n - 1) * dL[n - 1]
    return out


def _c(n: int) -> float:
    return 1.0 / (2 * n + 1)


def phi_table(dim: int, x: np.ndarray) -> np.ndarray:
    """Test basis phi_n = c_{n+1} (L_n - L_{n+2}) for n = 0..dim-1, shape (dim, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    L = legendre_table(dim + 1, x)
    return np.array([_c(n + 1) * (L[n] - L[n + 2]) for n in range(dim)])


def phi_eval(n: int, x, N: int | None = None) -> float | np.ndarray:
    """Test function phi_n(x); its derivative is -L_{n+1}(x).

    If N is given, n must lie in the mode range 0..N-3.
    """
    if n < 0 or (N is not None and n > N - 3):
        raise IndexError(f"mode index {n} outside valid range")
    scalar = np.isscalar(x)
    vals = phi_table(n + 1, _check_domain(x))[n]
    return float(vals[0]) if scalar else vals


def gauss_rule(q: int, tol: float = 1e-14, max_iter: int = 100) -> QuadratureRule:
    """Gauss-Legendre rule of order q.

    Nodes are the roots of L_q, found by damped Newton iteration started
    from Chebyshev points; weights via w_i = 2 / ((1 - x_i^2) L'_q(x_i)^2).
    """
    if q < 1:
        raise ValueError("quadrature order must be >= 1")
    if q == 1:
        return QuadratureRule(1, np.array([0.0]), np.array([2.0]))

    i = np.arange(1, q + 1)
    x = -np.cos((2 * i - 1) * np.pi / (2 * q))  # ascending Chebyshev guesses
    converged = np.zeros(q, dtype=bool)
    for _ in range(max_iter):
        L = legendre_table(q, x)
        # derivative from the recurrence-free identity (1-x^2) L'_q = q (L_{q-1} - x L_q)
        dLq = q * (L[q - 1] - x * L[q]) / (1.0 - x * x)
        delta = L[q] / dLq
        # damp steps that would leave the open interval
        scale = np.ones_like(delta)
        big = np.abs(delta) > 0.5 * (1.0 - np.abs(x))
        scale[big] = 0.5
        x = x - scale * delta
        converged = np.abs(delta) < tol
        if converged.all():
            break
    if not converged.all():
        idx = int(np.argmin(converged))
        raise RuntimeError(f"Newton iteration for quadrature node {idx} did not converge")

    L = legendre_table(q, x)
    dLq = q * (L[q - 1] - x * L[q]) / (1.0 - x * x)
    w = 2.0 / ((1.0 - x * x) * dLq * dLq)
    # enforce exact symmetry of the computed rule
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(q, x, w)


def cgl_points(N: int) -> np.ndarray:
    """Chebyshev-Gauss-Lobatto points x_j = -cos(pi j / N), j = 0..N, ascending."""
    if N < 1:
        raise ValueError("N must be >= 1")
    x = -np.cos(np.pi * np.arange(N + 1) / N)
    x[0] = -1.0
    x[-1] = 1.0
    return x


def default_quad_order(N: int) -> int:
    """Quadrature order used throughout: exact for all polynomial inner
    products of the scheme and accurate for the sinusoidal benchmark source."""
    return max(2 * N, 64)


def weighted_inner_product(f, g, a: float, b: float, rule: QuadratureRule) -> float:
    """Inner product of f and g with weight (1-x)^a (1+x)^b under `rule`.

    f and g may be callables or arrays of values at the rule's nodes.
    For negative a or b the caller must ensure the product f*g decays fast
    enough at the corresponding endpoint for the integral to exist.
    """
    x = rule.nodes
    fv = np.asarray(f(x) if callable(f) else f, dtype=float)
    gv = np.asarray(g(x) if callable(g) else g, dtype=float)
    integrand = fv * gv
    if a != 0:
        integrand = integrand * (1.0 - x) ** a
    if b != 0:
        integrand = integrand * (1.0 + x) ** b
    if not np.all(np.isfinite(integrand)):
        raise ValueError("non-finite integrand value at a quadrature node")
    return rule.integrate(integrand)
