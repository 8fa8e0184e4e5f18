"""Empirical restricted-isometry diagnostics for measurement matrices.

Random column submatrices are probed for their extreme singular values,
giving a certified lower bound on the restricted isometry constant (an
upper bound would need an exhaustive search, which is exponential).  Two
companion probes measure the quantities the recovery analysis actually
consumes: how close a column Gram restriction is to the identity, and how
far from orthogonal the spans of two disjoint column sets are.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import MeasurementMatrix
from .errors import InvariantViolationError, RankDeficiencyError
from .linalg import qr_from_columns
from .rng import StreamRng, derive_seed

# Budgets the analysis grants the two probes, in units of the isometry
# constant at level 2n.  The local budget 2.03*e covers the Gram deviation
# 2e + e^2 exactly while e <= 0.03, which is the regime the guarantees
# assume; past that the probe only reports.
LOCAL_APPROX_FACTOR = 2.03
LOCAL_APPROX_EPS_CAP = 0.03
PROJECTION_FACTOR = 2.2
PROJECTION_POWER_ITERS = 30
PROJECTION_POWER_TOL = 1e-8


@dataclass(frozen=True)
class RicEstimate:
    """Lower bound on the isometry constant at submatrix size ``m``."""

    m: int
    trials: int
    eps_lower: float
    sigma_min: float
    sigma_max: float

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "trials": self.trials,
            "eps_lower": self.eps_lower,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
        }


@dataclass(frozen=True)
class ProjectionReport:
    """Worst observed overlap between spans of disjoint column sets."""

    worst: float
    trials_run: int
    skipped: int

    def to_json_dict(self) -> dict:
        return {
            "worst": self.worst,
            "trials_run": self.trials_run,
            "skipped": self.skipped,
        }


def _extreme_singular_values(sub: np.ndarray) -> tuple[float, float]:
    eigenvalues = np.linalg.eigvalsh(sub.T @ sub)
    low = float(np.sqrt(max(eigenvalues[0], 0.0)))
    high = float(np.sqrt(max(eigenvalues[-1], 0.0)))
    return low, high


def estimate_ric(phi: MeasurementMatrix, m: int, trials: int = 100, seed: int = 0) -> RicEstimate:
    """Sample ``trials`` random m-column submatrices; bound eps from below.

    Each trial draws its columns from a stream keyed by the trial index
    alone, and the sampler hands out subsets whose first k elements do not
    depend on the requested size.  Probing the same matrix at a larger m
    therefore widens every trial's subset, so the returned bound is
    monotone in m by construction, matching the monotonicity of the true
    constant.
    """
    if not 1 <= m <= phi.dim:
        raise ValueError(f"submatrix size {m} out of range for d={phi.dim}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    eps = 0.0
    sig_min = np.inf
    sig_max = 0.0
    for trial in range(trials):
        rng = StreamRng(derive_seed(seed, "ric-trial", str(trial)))
        columns = np.sort(rng.subset(phi.dim, m))
        low, high = _extreme_singular_values(phi.columns(columns))
        sig_min = min(sig_min, low)
        sig_max = max(sig_max, high)
        eps = max(eps, 1.0 - low, high - 1.0)
    return RicEstimate(m=m, trials=trials, eps_lower=eps, sigma_min=float(sig_min), sigma_max=float(sig_max))


def check_local_approximation(
    phi: MeasurementMatrix, sparsity: int, trials: int = 100, seed: int = 0
) -> float:
    """Worst ratio of |(Gram v - v) on a small window| to |v| over trials.

    Draws a random ``sparsity``-sparse vector with normal values and a
    random window of at most ``sparsity`` coordinates, then measures how
    far applying measure-then-correlate drifts from the identity on that
    window.  Whenever the probed window-plus-support column set deviates
    from an isometry by at most ``LOCAL_APPROX_EPS_CAP``, the ratio is
    additionally checked against ``LOCAL_APPROX_FACTOR`` times that
    deviation, which the Gram bound guarantees in that regime.
    """
    if not 1 <= sparsity <= phi.dim:
        raise ValueError("sparsity out of range")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    worst = 0.0
    for trial in range(trials):
        rng = StreamRng(derive_seed(seed, "local-approx", str(trial)))
        support = np.sort(rng.subset(phi.dim, sparsity))
        values = rng.normal(sparsity)
        signal = np.zeros(phi.dim)
        signal[support] = values
        window = np.sort(rng.subset(phi.dim, int(rng.below(sparsity)) + 1))
        correlated = phi.adjoint_apply(phi.apply(signal))
        drift = float(np.linalg.norm(correlated[window] - signal[window]))
        ratio = drift / float(np.linalg.norm(values))
        worst = max(worst, ratio)

        involved = np.union1d(window, support)
        low, high = _extreme_singular_values(phi.columns(involved))
        deviation = max(1.0 - low, high - 1.0)
        if deviation <= LOCAL_APPROX_EPS_CAP and ratio > LOCAL_APPROX_FACTOR * deviation + 1e-12:
            raise InvariantViolationError(
                f"local drift {ratio:.3e} exceeds budget at deviation {deviation:.3e}"
            )
    return worst


def power_operator_norm(mat: np.ndarray, iters: int = 200, tol: float = 1e-12, seed: int = 0) -> float:
    """Largest singular value by power iteration on the normal matrix.

    Deterministic for fixed inputs: the starting vector comes from a seeded
    stream.  Stops early once successive estimates differ by less than
    ``tol`` relatively.  Written without a factorization on purpose, so it
    can cross-check factorization-based routes.
    """
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2:
        raise ValueError("expected a matrix")
    if mat.size == 0:
        return 0.0
    rng = StreamRng(derive_seed(seed, "power-iteration"))
    vec = rng.normal(mat.shape[1])
    vec_norm = float(np.linalg.norm(vec))
    if vec_norm == 0.0:
        vec = np.ones(mat.shape[1])
        vec_norm = float(np.linalg.norm(vec))
    vec /= vec_norm
    estimate = 0.0
    for _ in range(iters):
        image = mat @ vec
        previous, estimate = estimate, float(np.linalg.norm(image))
        if abs(estimate - previous) <= tol * max(estimate, 1e-30):
            break
        pulled = mat.T @ image
        pulled_norm = float(np.linalg.norm(pulled))
        if pulled_norm == 0.0:
            return estimate
        vec = pulled / pulled_norm
    return estimate


def check_projection_angle(
    phi: MeasurementMatrix, sparsity: int, trials: int = 100, seed: int = 0
) -> ProjectionReport:
    """Worst overlap between orthogonal projections onto disjoint column spans.

    Per trial, two disjoint column sets of size at most ``sparsity`` are
    drawn and orthonormalized; the overlap is the largest singular value of
    the cross product of the two bases, which equals the operator norm of
    the product of the two projections.  Trials whose columns are linearly
    dependent cannot be orthonormalized and are counted as skipped.
    """
    if not 1 <= sparsity <= phi.dim // 2:
        raise ValueError("need room for two disjoint sets: sparsity <= d / 2")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    worst = 0.0
    run = 0
    skipped = 0
    for trial in range(trials):
        rng = StreamRng(derive_seed(seed, "projection", str(trial)))
        size_one = int(rng.below(sparsity)) + 1
        size_two = int(rng.below(sparsity)) + 1
        combined = rng.subset(phi.dim, size_one + size_two)
        first = np.sort(combined[:size_one])
        second = np.sort(combined[size_one:])
        try:
            basis_one = qr_from_columns(phi.columns(first))
            basis_two = qr_from_columns(phi.columns(second))
        except RankDeficiencyError:
            skipped += 1
            continue
        cross = basis_one.q.T @ basis_two.q
        worst = max(
            worst,
            power_operator_norm(cross, iters=PROJECTION_POWER_ITERS, tol=PROJECTION_POWER_TOL),
        )
        run += 1
    return ProjectionReport(worst=worst, trials_run=run, skipped=skipped)


def ric_report(phi: MeasurementMatrix, sparsity: int, trials: int = 100, seed: int = 0) -> dict:
    """Bundle the three probes at level ``2 * sparsity`` into one JSON dict.

    The isometry bound is a lower bound, so ``within_budget: false`` flags
    tension rather than disproving anything; ``true`` means the observed
    behavior sits inside the budget the analysis would grant at that eps.
    """
    level = min(2 * sparsity, phi.dim)
    ric = estimate_ric(phi, level, trials=trials, seed=seed)
    local_worst = check_local_approximation(phi, sparsity, trials=trials, seed=seed)
    projection = check_projection_angle(phi, sparsity, trials=trials, seed=seed)
    return {
        "sparsity": sparsity,
        "ric": ric.to_json_dict(),
        "local_approximation": {
            "worst": local_worst,
            "budget_at_eps_lower": LOCAL_APPROX_FACTOR * ric.eps_lower,
            "within_budget": local_worst <= LOCAL_APPROX_FACTOR * ric.eps_lower,
        },
        "projection": {
            **projection.to_json_dict(),
            "budget_at_eps_lower": PROJECTION_FACTOR * ric.eps_lower,
            "within_budget": projection.worst <= PROJECTION_FACTOR * ric.eps_lower,
        },
    }
