import json

import numpy as np
import pytest

from romp_kit import (
    MeasurementMatrix,
    check_local_approximation,
    check_projection_angle,
    estimate_ric,
    gaussian,
    partial_orthogonal,
    power_operator_norm,
    ric_report,
)


def custom_matrix(columns: np.ndarray) -> MeasurementMatrix:
    columns = np.asarray(columns, dtype=float)
    return MeasurementMatrix(
        n_measurements=columns.shape[0], dim=columns.shape[1], ensemble="custom",
        scale=1.0, seed=0, matrix=columns,
    )


# --- estimate_ric -----------------------------------------------------------


def test_orthonormal_columns_have_zero_isometry_defect():
    phi = partial_orthogonal(16, 16, seed=0)
    estimate = estimate_ric(phi, 4, trials=50, seed=0)
    assert estimate.eps_lower <= 1e-10
    assert abs(estimate.sigma_min - 1.0) <= 1e-10
    assert abs(estimate.sigma_max - 1.0) <= 1e-10


def test_duplicated_columns_produce_large_defect():
    column = np.array([0.6, 0.8])
    phi = custom_matrix(np.column_stack([column, column]))
    estimate = estimate_ric(phi, 2, trials=5, seed=0)
    # the two-column submatrix is singular, so sigma_min is 0
    assert estimate.eps_lower >= 0.9


def test_estimate_is_reproducible_and_bounded():
    phi = gaussian(200, 400, seed=7)
    first = estimate_ric(phi, 5, trials=40, seed=3)
    second = estimate_ric(phi, 5, trials=40, seed=3)
    assert first.eps_lower == second.eps_lower
    assert first.sigma_min == second.sigma_min
    assert 0.0 < first.eps_lower < 1.0
    assert first.trials == 40 and first.m == 5


def test_estimate_monotone_in_subset_size():
    phi = gaussian(100, 300, seed=9)
    levels = [estimate_ric(phi, m, trials=60, seed=5).eps_lower for m in (2, 4, 8)]
    assert levels[0] <= levels[1] <= levels[2]


def test_estimate_validation():
    phi = gaussian(20, 40, seed=0)
    with pytest.raises(ValueError):
        estimate_ric(phi, 0, trials=5)
    with pytest.raises(ValueError):
        estimate_ric(phi, 41, trials=5)
    with pytest.raises(ValueError):
        estimate_ric(phi, 3, trials=0)


def test_estimate_json_round_trip():
    phi = gaussian(50, 100, seed=1)
    record = estimate_ric(phi, 3, trials=10, seed=2).to_json_dict()
    parsed = json.loads(json.dumps(record))
    assert set(parsed) == {"m", "trials", "eps_lower", "sigma_min", "sigma_max"}


# --- local approximation ----------------------------------------------------


def test_local_approximation_tiny_for_orthonormal_columns():
    phi = partial_orthogonal(32, 32, seed=0)
    worst = check_local_approximation(phi, 4, trials=40, seed=0)
    assert worst <= 1e-10


def test_local_approximation_visible_for_coherent_columns():
    theta = 0.2
    first = np.array([1.0, 0.0])
    second = np.array([np.cos(theta), np.sin(theta)])
    phi = custom_matrix(np.column_stack([first, second]))
    worst = check_local_approximation(phi, 1, trials=30, seed=0)
    assert worst >= 0.5


def test_local_approximation_reproducible():
    phi = gaussian(80, 200, seed=4)
    assert check_local_approximation(phi, 4, trials=30, seed=8) == check_local_approximation(
        phi, 4, trials=30, seed=8
    )


def test_local_approximation_validation():
    phi = gaussian(20, 40, seed=0)
    with pytest.raises(ValueError):
        check_local_approximation(phi, 0, trials=5)
    with pytest.raises(ValueError):
        check_local_approximation(phi, 3, trials=0)


# --- power iteration --------------------------------------------------------


def test_power_norm_matches_svd_on_small_matrices():
    rng = np.random.default_rng(17)
    for trial in range(20):
        rows = 1 + int(rng.integers(8))
        cols = 1 + int(rng.integers(8))
        mat = rng.standard_normal((rows, cols))
        expected = np.linalg.svd(mat, compute_uv=False)[0]
        got = power_operator_norm(mat, iters=2000, tol=1e-13, seed=trial)
        assert abs(got - expected) <= 1e-6 * max(1.0, expected)


def test_power_norm_transpose_symmetry():
    rng = np.random.default_rng(19)
    mat = rng.standard_normal((6, 3))
    direct = power_operator_norm(mat, iters=2000, tol=1e-13, seed=0)
    swapped = power_operator_norm(mat.T, iters=2000, tol=1e-13, seed=0)
    assert abs(direct - swapped) <= 1e-8 * max(1.0, direct)


def test_power_norm_scales_linearly():
    rng = np.random.default_rng(23)
    mat = rng.standard_normal((5, 5))
    base = power_operator_norm(mat, iters=2000, tol=1e-13, seed=0)
    tripled = power_operator_norm(3.0 * mat, iters=2000, tol=1e-13, seed=0)
    assert abs(tripled - 3.0 * base) <= 1e-6 * max(1.0, base)


def test_power_norm_zero_matrix():
    assert power_operator_norm(np.zeros((4, 3))) == 0.0


# --- projection angle -------------------------------------------------------


def test_projection_angle_zero_for_orthonormal_columns():
    phi = partial_orthogonal(32, 32, seed=0)
    report = check_projection_angle(phi, 4, trials=30, seed=0)
    assert report.worst <= 1e-8
    assert report.trials_run == 30
    assert report.skipped == 0


def test_projection_angle_near_one_for_coherent_columns():
    theta = 0.05
    columns = np.column_stack(
        [np.array([1.0, 0.0]), np.array([np.cos(theta), np.sin(theta)])]
    )
    phi = custom_matrix(columns)
    report = check_projection_angle(phi, 1, trials=20, seed=0)
    assert report.worst >= 0.99


def test_projection_angle_skips_rank_deficient_draws():
    # a zero column can land in either subset; that draw cannot be
    # orthonormalized and must be counted rather than crash
    columns = np.column_stack([np.array([0.6, 0.8]), np.zeros(2)])
    phi = custom_matrix(columns)
    report = check_projection_angle(phi, 1, trials=10, seed=0)
    assert report.trials_run + report.skipped == 10
    assert report.skipped > 0


def test_projection_angle_validation():
    phi = gaussian(20, 40, seed=0)
    with pytest.raises(ValueError):
        check_projection_angle(phi, 21, trials=5)
    with pytest.raises(ValueError):
        check_projection_angle(phi, 0, trials=5)


def test_projection_report_json():
    phi = gaussian(30, 60, seed=2)
    record = check_projection_angle(phi, 2, trials=5, seed=1).to_json_dict()
    parsed = json.loads(json.dumps(record))
    assert set(parsed) == {"worst", "trials_run", "skipped"}


# --- combined report --------------------------------------------------------


def test_ric_report_structure_and_serialization():
    phi = gaussian(100, 200, seed=6)
    report = ric_report(phi, 4, trials=20, seed=3)
    parsed = json.loads(json.dumps(report))
    assert set(parsed) == {"sparsity", "ric", "local_approximation", "projection"}
    assert parsed["ric"]["m"] == 8
    local = parsed["local_approximation"]
    assert set(local) == {"worst", "budget_at_eps_lower", "within_budget"}
    proj = parsed["projection"]
    assert set(proj) == {"worst", "trials_run", "skipped", "budget_at_eps_lower", "within_budget"}


def test_ric_report_budgets_hold_for_well_conditioned_matrix():
    phi = gaussian(120, 160, seed=14)
    report = ric_report(phi, 2, trials=30, seed=4)
    assert report["local_approximation"]["within_budget"]
    assert report["projection"]["within_budget"]
