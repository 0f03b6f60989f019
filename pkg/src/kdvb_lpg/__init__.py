"""Legendre-Petrov-Galerkin spectral solver for a linear third-order
dispersive equation with dissipation and time-dependent coefficients,
plus the benchmark experiments built on a manufactured exact solution.
"""
from ._kernel import HAVE_COMPILED, available_backends, backend_name
from .errors import (
    ConvergenceTable,
    ErrorReport,
    SweepGrid,
    epsilon_error,
    fit_order,
    fitted_error_at,
    to_decibels,
)
from .experiments import (
    ManufacturedProblem,
    bounded_case_study,
    manufactured_errors,
    modal_spectrum_diagnostics,
    spatial_convergence_study,
    sweep_alpha_beta,
    sweep_beta_dt,
    temporal_convergence_study,
)
from .legendre import (
    BasisSpec,
    QuadratureRule,
    cgl_points,
    gauss_rule,
    legendre_eval,
    phi_eval,
    weighted_inner_product,
)
from .operators import (
    DiscrepancyReport,
    OperatorSet,
    SingularOperatorError,
    StepMatrices,
    build_step_matrices,
    operator_set,
    verify_closed_forms,
)
from .profiles import CoefficientProfile, case_profiles
from .solver import (
    ModalState,
    SolverConfig,
    StabilityReport,
    Trajectory,
    hypothesis_H_check,
    nodal_values,
    project_initial,
    run,
    stability_certificate,
    step,
)
from .spectra import amplification_spectrum, qr_eigvals

__version__ = "0.1.0"

__all__ = [
    "HAVE_COMPILED",
    "available_backends",
    "backend_name",
    "ConvergenceTable",
    "ErrorReport",
    "SweepGrid",
    "epsilon_error",
    "fit_order",
    "fitted_error_at",
    "to_decibels",
    "ManufacturedProblem",
    "bounded_case_study",
    "manufactured_errors",
    "modal_spectrum_diagnostics",
    "spatial_convergence_study",
    "sweep_alpha_beta",
    "sweep_beta_dt",
    "temporal_convergence_study",
    "BasisSpec",
    "QuadratureRule",
    "cgl_points",
    "gauss_rule",
    "legendre_eval",
    "phi_eval",
    "weighted_inner_product",
    "DiscrepancyReport",
    "OperatorSet",
    "SingularOperatorError",
    "StepMatrices",
    "build_step_matrices",
    "operator_set",
    "verify_closed_forms",
    "CoefficientProfile",
    "case_profiles",
    "ModalState",
    "SolverConfig",
    "StabilityReport",
    "Trajectory",
    "hypothesis_H_check",
    "nodal_values",
    "project_initial",
    "run",
    "stability_certificate",
    "step",
    "amplification_spectrum",
    "qr_eigvals",
]
