"""Experiment drivers: studies, sweeps, case bounds, modal diagnostics."""
import numpy as np
import pytest

from kdvb_lpg.experiments import (
    ALPHA_BETA_ALPHAS,
    ALPHA_BETA_BETAS,
    BETA_DT_BETAS,
    BETA_DT_DTS,
    bounded_case_study,
    manufactured_errors,
    modal_spectrum_diagnostics,
    spatial_convergence_study,
    sweep_alpha_beta,
    sweep_beta_dt,
    temporal_convergence_study,
)


def test_sweep_axis_definitions():
    assert len(BETA_DT_BETAS) == 20 and len(BETA_DT_DTS) == 20
    assert BETA_DT_BETAS[0] == 0.0 and BETA_DT_BETAS[-1] == pytest.approx(0.76)
    assert BETA_DT_DTS[0] == pytest.approx(2e-4) and BETA_DT_DTS[-1] == pytest.approx(2.1e-3)
    assert len(ALPHA_BETA_ALPHAS) == 20 and len(ALPHA_BETA_BETAS) == 20
    assert ALPHA_BETA_ALPHAS[0] == pytest.approx(0.2475)
    assert ALPHA_BETA_ALPHAS[-1] == pytest.approx(1.15)
    assert ALPHA_BETA_BETAS[0] == 0.0
    assert ALPHA_BETA_BETAS[-1] == pytest.approx(19 * 3.25e-2)


def test_manufactured_errors_fields():
    res = manufactured_errors(12, 1e-3, 0.1, 1.0, 0.2)
    assert set(res) == {"eps_l1l1", "eps_l1l2", "db_l1l1", "db_l1l2", "n_steps"}
    assert res["n_steps"] == 100
    assert res["eps_l1l1"] > res["eps_l1l2"] > 0
    assert res["db_l1l2"] == pytest.approx(20 * np.log10(res["eps_l1l2"]))


def test_temporal_study_errors_decrease_with_dt():
    tables = temporal_convergence_study(betas=(0.0,), dts=(2e-3, 1e-3, 5e-4), N=14, T=0.1)
    errs = tables[0.0].errors(2)
    values = tables[0.0].values()
    assert values == sorted(values)
    # rows sorted ascending in dt, so errors ascend too
    assert errs[0] < errs[1] < errs[2]
    assert tables[0.0].order(2) > 0


def test_spatial_study_errors_decrease_with_N():
    tables = spatial_convergence_study(betas=(0.0, 0.8), n_values=(14, 18, 22), dt=1e-4, T=0.5)
    for beta in (0.0, 0.8):
        errs = tables[beta].errors(2)
        assert errs[0] > errs[1] > errs[2]
        assert all(e > 0 for e in errs)
    # at these resolutions the error is dominated by spatial truncation of
    # the oscillatory solution, so the two beta levels stay close
    for e0, e8 in zip(tables[0.0].errors(2), tables[0.8].errors(2)):
        assert abs(e0 - e8) < 0.1 * e0


def test_small_sweep_beta_dt_structure():
    grid = sweep_beta_dt(N=10, T=0.05)
    assert grid.eps.shape == (20, 20)
    assert np.all(np.isfinite(grid.eps)) and np.all(grid.eps > 0)
    assert np.all(np.isfinite(grid.db))


def test_sweep_deterministic_and_parallel_consistent():
    a = sweep_beta_dt(N=8, T=0.02)
    b = sweep_beta_dt(N=8, T=0.02, workers=2)
    assert np.array_equal(a.eps, b.eps)


def test_small_sweep_alpha_beta_dt_ordering():
    g3 = sweep_alpha_beta(dt=1e-3, N=10, T=0.05)
    g4 = sweep_alpha_beta(dt=5e-4, N=10, T=0.05)
    assert g3.eps.shape == (20, 20)
    # finer time step is uniformly at least as accurate, cell-wise
    assert np.all(g4.eps <= g3.eps * (1.0 + 1e-9))


def test_bounded_case_study_report_shape():
    rep = bounded_case_study(1, dts=(1e-2,), N=12, T=0.2)
    assert rep.case == 1
    row = rep.rows[0]
    assert set(row) == {"dt", "eps", "eps_min", "eps_max", "contained"}
    assert row["contained"] == (row["eps_min"] <= row["eps"] <= row["eps_max"])
    with pytest.raises(ValueError):
        bounded_case_study(3)


def test_modal_diagnostics_concentration():
    diag = modal_spectrum_diagnostics(N=32, k=50, dt=1e-4)
    assert set(diag.series) == {"solution", "exact", "initial", "source"}
    for tag in diag.series:
        assert len(diag.series[tag]) == 30
    # the exact solution and initial datum concentrate in low modes
    assert diag.tail_fraction("exact", 22) < 0.01
    assert diag.tail_fraction("initial", 22) < 0.01
    frac = diag.top_fraction("solution", 5)
    assert 0.0 <= frac <= 1.0
