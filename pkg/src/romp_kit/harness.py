"""Monte-Carlo experiment harness.

Three experiments over (dimension, sparsity, measurement-count) grids:

- ``recovery_percent``: fraction of exactly recovered signals per cell.
- ``iteration_count``: how many iterations the pursuit needed per cell.
- ``boundary_99``: for each sparsity, the smallest measurement count on a
  grid whose recovery fraction reaches 99 percent (found by binary search,
  ``-1`` when even the largest grid point falls short).

Every cell derives its matrix and signal seeds from the master seed and the
cell coordinates, so results are reproducible cell by cell, independent of
execution order and worker count.  Rows are written as CSV with a fixed
header plus a JSON sidecar echoing the configuration; rerunning a config
reproduces the CSV byte for byte except for the runtime column.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass
from importlib.metadata import PackageNotFoundError, version
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from .ensembles import ENSEMBLES, make
from .recovery import RompOptions, omp, romp
from .rng import derive_seed
from .signals import compressible_sparse, flat_sparse

EXPERIMENTS = ("recovery_percent", "iteration_count", "boundary_99")
SIGNAL_KINDS = ("flat", "compressible", "both")
ALGORITHMS = ("romp", "omp", "both")

CSV_HEADER = (
    "d,N,n,algorithm,signal_kind,trials,exact_recovery_fraction,"
    "mean_iterations,mean_I_size,mean_runtime_ms"
)
EXACT_RECOVERY_TOL = 1e-6  # linf distance that still counts as exact
SENTINEL_NO_BOUNDARY = -1


def _package_version() -> str:
    try:
        return version("romp-kit")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    dim: int
    sparsities: tuple[int, ...]
    measurement_counts: tuple[int, ...] = ()
    ensemble: str = "gaussian"
    signal_kind: str = "flat"
    p: float = 0.5
    trials: int = 100
    seed: int = 0
    algorithm: str = "romp"
    out: str = "results.csv"
    matrix_per_trial: bool = False
    grid_step: int = 4
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if not self.sparsities or any(n < 1 or n > self.dim for n in self.sparsities):
            raise ValueError("sparsities must be nonempty and within [1, dim]")
        if any(count < 1 or count > self.dim for count in self.measurement_counts):
            raise ValueError("measurement counts must be within [1, dim]")
        if self.experiment != "boundary_99" and not self.measurement_counts:
            raise ValueError(f"{self.experiment} needs at least one measurement count")
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"unknown ensemble {self.ensemble!r}")
        if self.signal_kind not in SIGNAL_KINDS:
            raise ValueError(f"unknown signal kind {self.signal_kind!r}")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie strictly between 0 and 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.grid_step < 1 or self.grid_step > self.dim:
            raise ValueError("grid_step must be in [1, dim]")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def kinds(self) -> tuple[str, ...]:
        return ("flat", "compressible") if self.signal_kind == "both" else (self.signal_kind,)

    @property
    def algorithms(self) -> tuple[str, ...]:
        return ("romp", "omp") if self.algorithm == "both" else (self.algorithm,)


@dataclass(frozen=True)
class ExperimentRow:
    dim: int
    n_measurements: int
    sparsity: int
    algorithm: str
    signal_kind: str
    trials: int
    exact_recovery_fraction: float
    mean_iterations: float
    mean_selected_size: float
    mean_runtime_ms: float

    def to_csv_fields(self) -> list[str]:
        return [
            str(self.dim),
            str(self.n_measurements),
            str(self.sparsity),
            self.algorithm,
            self.signal_kind,
            str(self.trials),
            str(self.exact_recovery_fraction),
            str(self.mean_iterations),
            str(self.mean_selected_size),
            f"{self.mean_runtime_ms:.3f}",
        ]


@dataclass(frozen=True)
class CellSpec:
    dim: int
    n_measurements: int
    sparsity: int
    ensemble: str
    signal_kind: str  # "flat" or "compressible"
    p: float
    trials: int
    seed: int
    algorithm: str  # "romp" or "omp"
    matrix_per_trial: bool


def _kind_token(kind: str, p: float) -> str:
    return "flat" if kind == "flat" else f"compressible(p={p:g})"


def run_cell(spec: CellSpec) -> ExperimentRow:
    """Run one (matrix, signal, algorithm) cell and aggregate its trials.

    The matrix seed ignores the algorithm and the trial index (unless
    matrix_per_trial), so both pursuits face identical instances; the
    signal seed ignores the measurement count, so recovery curves across N
    see the same signals.
    """
    kind = _kind_token(spec.signal_kind, spec.p)
    matrix_tokens = [
        "matrix", str(spec.dim), str(spec.n_measurements), str(spec.sparsity), spec.ensemble,
    ]
    matrix = None
    if not spec.matrix_per_trial:
        matrix = make(
            spec.ensemble, spec.n_measurements, spec.dim,
            seed=derive_seed(spec.seed, *matrix_tokens),
        )
    pursuit = romp if spec.algorithm == "romp" else omp
    opts = RompOptions()

    recovered = 0
    iteration_sum = 0
    size_sum = 0
    runtime_sum = 0.0
    for trial in range(spec.trials):
        if spec.matrix_per_trial:
            matrix = make(
                spec.ensemble, spec.n_measurements, spec.dim,
                seed=derive_seed(spec.seed, *matrix_tokens, str(trial)),
            )
        signal_seed = derive_seed(
            spec.seed, "signal", str(spec.dim), str(spec.sparsity), kind, str(trial)
        )
        if spec.signal_kind == "flat":
            signal = flat_sparse(spec.dim, spec.sparsity, signal_seed)
        else:
            signal = compressible_sparse(spec.dim, spec.sparsity, spec.p, signal_seed)
        dense = signal.to_dense()
        x = matrix.apply(dense)

        start = time.perf_counter()
        result = pursuit(matrix, x, spec.sparsity, opts)
        runtime_sum += (time.perf_counter() - start) * 1e3

        if float(np.max(np.abs(result.reconstruction - dense))) <= EXACT_RECOVERY_TOL:
            recovered += 1
        iteration_sum += result.iterations
        size_sum += len(result.selected)

    return ExperimentRow(
        dim=spec.dim,
        n_measurements=spec.n_measurements,
        sparsity=spec.sparsity,
        algorithm=spec.algorithm,
        signal_kind=kind,
        trials=spec.trials,
        exact_recovery_fraction=recovered / spec.trials,
        mean_iterations=iteration_sum / spec.trials,
        mean_selected_size=size_sum / spec.trials,
        mean_runtime_ms=runtime_sum / spec.trials,
    )


def _grid_specs(config: ExperimentConfig) -> list[CellSpec]:
    specs = []
    for sparsity in config.sparsities:
        for count in config.measurement_counts:
            for kind in config.kinds:
                for algorithm in config.algorithms:
                    specs.append(
                        CellSpec(
                            dim=config.dim,
                            n_measurements=count,
                            sparsity=sparsity,
                            ensemble=config.ensemble,
                            signal_kind=kind,
                            p=config.p,
                            trials=config.trials,
                            seed=config.seed,
                            algorithm=algorithm,
                            matrix_per_trial=config.matrix_per_trial,
                        )
                    )
    return specs


def _map(worker_count: int, fn, items: list) -> list:
    if worker_count == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with Pool(min(worker_count, len(items))) as pool:
        return pool.map(fn, items, chunksize=1)


@dataclass(frozen=True)
class BoundaryTask:
    dim: int
    sparsity: int
    ensemble: str
    signal_kind: str
    p: float
    trials: int
    seed: int
    algorithm: str
    matrix_per_trial: bool
    grid_step: int


def _boundary_cell(task: BoundaryTask, count: int) -> ExperimentRow:
    return run_cell(
        CellSpec(
            dim=task.dim,
            n_measurements=count,
            sparsity=task.sparsity,
            ensemble=task.ensemble,
            signal_kind=task.signal_kind,
            p=task.p,
            trials=task.trials,
            seed=task.seed,
            algorithm=task.algorithm,
            matrix_per_trial=task.matrix_per_trial,
        )
    )


def run_boundary_task(task: BoundaryTask) -> ExperimentRow:
    """Smallest grid N whose cell reaches 99 percent recovery, or -1.

    Checks the top of the grid first; binary search only makes sense when a
    passing point exists, and recovery is monotone in N for all practical
    purposes.  The returned row carries the boundary cell's statistics (the
    top cell's when no grid point passes) with N replaced by the finding.
    """
    grid = list(range(task.grid_step, task.dim + 1, task.grid_step))
    evaluated: dict[int, ExperimentRow] = {}

    def passes(count: int) -> bool:
        if count not in evaluated:
            evaluated[count] = _boundary_cell(task, count)
        return evaluated[count].exact_recovery_fraction >= 0.99

    if not passes(grid[-1]):
        top = evaluated[grid[-1]]
        return ExperimentRow(
            dim=top.dim,
            n_measurements=SENTINEL_NO_BOUNDARY,
            sparsity=top.sparsity,
            algorithm=top.algorithm,
            signal_kind=top.signal_kind,
            trials=top.trials,
            exact_recovery_fraction=top.exact_recovery_fraction,
            mean_iterations=top.mean_iterations,
            mean_selected_size=top.mean_selected_size,
            mean_runtime_ms=top.mean_runtime_ms,
        )

    low, high = 0, len(grid) - 1
    while low < high:
        mid = (low + high) // 2
        if passes(grid[mid]):
            high = mid
        else:
            low = mid + 1
    return evaluated[grid[low]]


def run_experiment(config: ExperimentConfig) -> list[ExperimentRow]:
    """Execute the configured experiment and return its rows in grid order."""
    if config.experiment == "boundary_99":
        tasks = [
            BoundaryTask(
                dim=config.dim,
                sparsity=sparsity,
                ensemble=config.ensemble,
                signal_kind=kind,
                p=config.p,
                trials=config.trials,
                seed=config.seed,
                algorithm=algorithm,
                matrix_per_trial=config.matrix_per_trial,
                grid_step=config.grid_step,
            )
            for sparsity in config.sparsities
            for kind in config.kinds
            for algorithm in config.algorithms
        ]
        return _map(config.workers, run_boundary_task, tasks)
    return _map(config.workers, run_cell, _grid_specs(config))


def write_rows(rows: list[ExperimentRow], out: str | Path, config: ExperimentConfig) -> Path:
    """Write rows as CSV plus a JSON sidecar (config echo and version)."""
    out = Path(out)
    with out.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER.split(","))
        for row in rows:
            writer.writerow(row.to_csv_fields())
    sidecar = {
        "version": _package_version(),
        "config": asdict(config),
        "rows": len(rows),
    }
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")
    return out


def run_and_write(config: ExperimentConfig) -> Path:
    return write_rows(run_experiment(config), config.out, config)
