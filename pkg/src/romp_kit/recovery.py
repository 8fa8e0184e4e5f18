"""Greedy sparse recovery: regularized matching pursuit and the OMP baseline.

Both pursuits share one loop: correlate the residual with every column,
identify a batch of large coordinates, optionally regularize the batch down
to a subset with comparable magnitudes, then refit by least squares on all
selected columns and subtract.  The regularized variant selects up to the
sparsity level per iteration; the baseline selects exactly one coordinate.

Every iteration is traced, and optional runtime checks enforce the
structural guarantees the selection strategy is designed to maintain: fresh
nonempty batches, within-batch magnitude comparability (max at most twice
the min), monotone residuals, and near-orthogonality of the residual to the
selected columns after each refit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ensembles import MeasurementMatrix
from .errors import InvariantViolationError, RankDeficiencyError
from .linalg import QrState, qr_append, qr_from_columns, solve_ls_cgls, solve_ls_qr
from .signals import SparseSignal

LS_STRATEGIES = ("qr", "cgls")
REGULARIZERS = ("exact_interval", "dyadic_bands")

# Comparability band: within a regularized batch, max <= RATIO * min.
COMPARABLE_RATIO = 2.0
# Post-refit orthogonality budget, relative to the initial correlation norm.
CORRELATION_TOL = 1e-8


@dataclass(frozen=True)
class RompOptions:
    """Knobs for the pursuit loop; defaults follow the exact-recovery setup."""

    max_iterations: int | None = None  # None resolves to the sparsity level
    residual_tol_rel: float = 1e-6
    residual_tol_abs: float = 1e-12
    ls_strategy: str = "qr"
    regularizer: str = "exact_interval"
    check_invariants: bool = True
    cgls_tol: float = 1e-10
    cgls_max_iter: int = 200

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.residual_tol_rel < 0 or self.residual_tol_abs < 0:
            raise ValueError("residual tolerances must be nonnegative")
        if self.ls_strategy not in LS_STRATEGIES:
            raise ValueError(f"unknown ls_strategy {self.ls_strategy!r}")
        if self.regularizer not in REGULARIZERS:
            raise ValueError(f"unknown regularizer {self.regularizer!r}")


@dataclass(frozen=True)
class IterationRecord:
    """One pursuit iteration: the batch it identified and what that cost."""

    iteration: int
    identified: tuple[int, ...]
    regularized: tuple[int, ...]
    residual_norm_before: float
    residual_norm_after: float
    newly_correct_fraction: float | None = None
    selected_correlation_norm: float | None = None

    def to_json_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "identified": list(self.identified),
            "regularized": list(self.regularized),
            "residual_norm_before": self.residual_norm_before,
            "residual_norm_after": self.residual_norm_after,
            "newly_correct_fraction": self.newly_correct_fraction,
            "selected_correlation_norm": self.selected_correlation_norm,
        }


@dataclass(frozen=True)
class RecoveryResult:
    """Output of a pursuit: selected index set, refit signal, full trace."""

    selected: tuple[int, ...]
    reconstruction: np.ndarray = field(repr=False)
    trace: tuple[IterationRecord, ...]
    termination: str  # residual_zero | max_iterations | index_budget | stalled
    diagnostic: str | None = None

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def to_json_dict(self) -> dict:
        support = np.flatnonzero(self.reconstruction)
        return {
            "selected": list(self.selected),
            "termination": self.termination,
            "diagnostic": self.diagnostic,
            "iterations": self.iterations,
            "trace": [record.to_json_dict() for record in self.trace],
            "reconstruction": {
                "d": int(self.reconstruction.size),
                "support": support.tolist(),
                "values": self.reconstruction[support].tolist(),
            },
        }


def identify(correlations: np.ndarray, batch_size: int) -> np.ndarray:
    """Indices of the largest-magnitude coordinates, at most ``batch_size``.

    Only nonzero coordinates qualify; ties break toward the smaller index.
    Returned in descending magnitude order.  An all-zero input yields an
    empty selection, which pursuit loops treat as a stall.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")
    correlations = np.asarray(correlations, dtype=float)
    if not np.all(np.isfinite(correlations)):
        raise ValueError("correlations must be finite")
    magnitudes = np.abs(correlations)
    order = np.argsort(-magnitudes, kind="stable")
    order = order[magnitudes[order] > 0]
    return order[:batch_size]


def _best_interval(sorted_mags: np.ndarray) -> tuple[int, int]:
    # Maximal-energy window [a, b] of the descending rearrangement subject to
    # sorted_mags[a] <= RATIO * sorted_mags[b].  For each window head the
    # admissible tail only grows as the head moves right, so one sweep with
    # two pointers suffices; ties keep the leftmost (largest-magnitude) window.
    count = sorted_mags.size
    prefix = np.concatenate([[0.0], np.cumsum(sorted_mags**2)])
    best = (0, 0)
    best_energy = -1.0
    tail = 0
    for head in range(count):
        if tail < head:
            tail = head
        while tail + 1 < count and sorted_mags[head] <= COMPARABLE_RATIO * sorted_mags[tail + 1]:
            tail += 1
        energy = prefix[tail + 1] - prefix[head]
        if energy > best_energy:
            best = (head, tail)
            best_energy = energy
    return best


def _best_dyadic_band(mags: np.ndarray, total_count: int) -> np.ndarray:
    # Partition coordinates into bands whose magnitudes fall within a factor
    # of two of each other, thresholded at norm/2, norm/4, ...; return the
    # positions of the most energetic band.  Only ceil(log2 m) + 1 bands are
    # scanned: anything smaller carries a negligible share of the energy.
    norm = float(np.linalg.norm(mags))
    depth = max(1, math.ceil(math.log2(total_count)) + 1) if total_count > 1 else 1
    best_positions: np.ndarray | None = None
    best_energy = -1.0
    upper = norm
    for _ in range(depth):
        lower = upper / 2.0
        members = np.flatnonzero((mags > lower) & (mags <= upper))
        if members.size:
            energy = float(np.sum(mags[members] ** 2))
            if energy > best_energy:
                best_positions = members
                best_energy = energy
        upper = lower
    assert best_positions is not None, "top coordinate always lands in a scanned band"
    return best_positions


def regularize(values: np.ndarray, indices: np.ndarray | None = None,
               mode: str = "exact_interval") -> np.ndarray:
    """Pick a maximal-energy subset whose magnitudes are within a factor of 2.

    ``values`` are the (signed) correlations restricted to the identified
    set and ``indices`` their coordinate labels (positions are used when
    omitted).  ``exact_interval`` scans windows of the descending magnitude
    rearrangement, where the optimum over all comparable subsets always
    lies; ``dyadic_bands`` settles for the best magnitude-halving band,
    which is enough for the energy guarantee and never beats the interval.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("expected a nonempty 1-D identified set")
    if indices is None:
        indices = np.arange(values.size, dtype=np.int64)
    else:
        indices = np.asarray(indices, dtype=np.int64)
        if indices.shape != values.shape:
            raise ValueError("indices must align with values")
    if mode not in REGULARIZERS:
        raise ValueError(f"unknown regularizer {mode!r}")

    magnitudes = np.abs(values)
    if not np.all(np.isfinite(magnitudes)):
        raise ValueError("values must be finite")
    nonzero = np.flatnonzero(magnitudes)
    if nonzero.size == 0:
        raise ValueError("cannot regularize an all-zero set")

    if mode == "dyadic_bands":
        positions = nonzero[_best_dyadic_band(magnitudes[nonzero], values.size)]
    else:
        order = nonzero[np.argsort(-magnitudes[nonzero], kind="stable")]
        head, tail = _best_interval(magnitudes[order])
        positions = order[head : tail + 1]
    return indices[positions]


def _embed(dim: int, selected: list[int], coefficients: np.ndarray | None) -> np.ndarray:
    dense = np.zeros(dim)
    if coefficients is not None and selected:
        dense[np.asarray(selected, dtype=np.int64)] = coefficients
    return dense


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolationError(message)


def _pursuit(
    phi: MeasurementMatrix,
    x: np.ndarray,
    sparsity: int,
    opts: RompOptions,
    truth: SparseSignal | None,
    regularized_batches: bool,
) -> RecoveryResult:
    x = np.asarray(x, dtype=float)
    if x.shape != (phi.n_measurements,):
        raise ValueError(f"measurement length {x.shape} does not match N={phi.n_measurements}")
    if sparsity < 1:
        raise ValueError("sparsity must be at least 1")

    max_iterations = opts.max_iterations if opts.max_iterations is not None else sparsity
    residual_stop = opts.residual_tol_abs + opts.residual_tol_rel * float(np.linalg.norm(x))
    index_budget = 2 * sparsity
    truth_support = set(truth.support.tolist()) if truth is not None else None
    base_correlation_norm = float(np.linalg.norm(phi.adjoint_apply(x)))

    selected: list[int] = []
    selected_mask = np.zeros(phi.dim, dtype=bool)
    basis = QrState.empty(phi.n_measurements)
    coefficients: np.ndarray | None = None
    residual = x.copy()
    trace: list[IterationRecord] = []
    termination: str | None = None
    diagnostic: str | None = None

    if float(np.linalg.norm(residual)) <= residual_stop:
        termination = "residual_zero"

    iteration = 0
    while termination is None:
        iteration += 1
        correlations = phi.adjoint_apply(residual)
        # The refit keeps the residual orthogonal to selected columns, so
        # their correlations are exact zeros up to roundoff; make that
        # structural so batches are always fresh.
        correlations[selected_mask] = 0.0

        batch = identify(correlations, sparsity if regularized_batches else 1)
        if batch.size == 0:
            termination = "stalled"
            diagnostic = f"zero correlations with residual norm {np.linalg.norm(residual):.3e}"
            break
        if regularized_batches:
            chosen = regularize(correlations[batch], batch, mode=opts.regularizer)
        else:
            chosen = batch
        chosen = np.sort(chosen)
        reselected = chosen[selected_mask[chosen]]

        residual_before = float(np.linalg.norm(residual))
        if opts.ls_strategy == "qr":
            try:
                grown = basis
                for index in chosen:
                    grown = qr_append(grown, phi.matrix[:, index])
            except RankDeficiencyError as err:
                termination = "stalled"
                diagnostic = f"rank-deficient selection at iteration {iteration}: {err}"
                break
            basis = grown
            selected.extend(int(i) for i in chosen)
            coefficients = solve_ls_qr(basis, x)
        else:
            selected.extend(int(i) for i in chosen)
            solve = solve_ls_cgls(
                phi.columns(selected), x, tol=opts.cgls_tol, max_iter=opts.cgls_max_iter
            )
            coefficients = solve.y
            if not solve.converged:
                diagnostic = (
                    f"cgls hit the iteration cap at pursuit iteration {iteration}"
                )
        selected_mask[chosen] = True
        residual = x - phi.columns(selected) @ coefficients
        residual_norm = float(np.linalg.norm(residual))

        correct_fraction = None
        if truth_support is not None:
            correct_fraction = len(truth_support.intersection(chosen.tolist())) / chosen.size

        correlation_norm = None
        if opts.check_invariants:
            correlation_norm = float(
                np.linalg.norm(phi.adjoint_apply(residual)[np.asarray(selected)])
            )
            _check(
                reselected.size == 0,
                f"batch re-selected indices {reselected.tolist()}",
            )
            batch_mags = np.abs(correlations[chosen])
            _check(
                float(batch_mags.max()) <= COMPARABLE_RATIO * float(batch_mags.min()),
                "regularized batch magnitudes are not comparable",
            )
            _check(
                residual_norm <= residual_before * (1 + 1e-9) + 1e-12,
                f"residual grew: {residual_before:.6e} -> {residual_norm:.6e}",
            )
            _check(
                correlation_norm <= CORRELATION_TOL * base_correlation_norm,
                f"refit left correlation {correlation_norm:.3e} on selected columns",
            )

        trace.append(
            IterationRecord(
                iteration=iteration,
                identified=tuple(int(i) for i in np.sort(batch)),
                regularized=tuple(int(i) for i in chosen),
                residual_norm_before=residual_before,
                residual_norm_after=residual_norm,
                newly_correct_fraction=correct_fraction,
                selected_correlation_norm=correlation_norm,
            )
        )

        if residual_norm <= residual_stop:
            termination = "residual_zero"
        elif len(selected) >= index_budget:
            termination = "index_budget"
        elif iteration >= max_iterations:
            termination = "max_iterations"

    return RecoveryResult(
        selected=tuple(sorted(selected)),
        reconstruction=_embed(phi.dim, selected, coefficients),
        trace=tuple(trace),
        termination=termination,
        diagnostic=diagnostic,
    )


def romp(
    phi: MeasurementMatrix,
    x: np.ndarray,
    sparsity: int,
    opts: RompOptions | None = None,
    truth: SparseSignal | None = None,
) -> RecoveryResult:
    """Regularized orthogonal matching pursuit.

    Each iteration identifies up to ``sparsity`` large correlations,
    regularizes them to a comparable-magnitude batch of maximal energy, and
    refits.  Stops on a (relatively) zero residual, after ``max_iterations``
    (default: ``sparsity``), when the selected set reaches twice the
    sparsity, or when it stalls (zero correlations / dependent columns).
    """
    return _pursuit(phi, x, sparsity, opts or RompOptions(), truth, regularized_batches=True)


def omp(
    phi: MeasurementMatrix,
    x: np.ndarray,
    sparsity: int,
    opts: RompOptions | None = None,
    truth: SparseSignal | None = None,
) -> RecoveryResult:
    """Orthogonal matching pursuit baseline: one coordinate per iteration."""
    return _pursuit(phi, x, sparsity, opts or RompOptions(), truth, regularized_batches=False)


def reconstruct(phi: MeasurementMatrix, x: np.ndarray, selected) -> np.ndarray:
    """Least-squares fit on the selected columns, embedded in R^d.

    With the true support inside ``selected`` and an injective submatrix the
    fit reproduces the signal exactly; a dependent column set raises
    :class:`RankDeficiencyError`.
    """
    index_list = sorted(int(i) for i in selected)
    if not index_list:
        raise ValueError("selected set must be nonempty")
    if len(index_list) > phi.n_measurements:
        raise ValueError("selected set larger than the measurement count")
    if index_list[0] < 0 or index_list[-1] >= phi.dim:
        raise ValueError("selected indices out of range")
    x = np.asarray(x, dtype=float)
    state = qr_from_columns(phi.columns(index_list))
    coefficients = solve_ls_qr(state, x)
    return _embed(phi.dim, index_list, coefficients)
