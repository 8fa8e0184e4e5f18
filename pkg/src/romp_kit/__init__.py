"""Sparse signal recovery by regularized greedy pursuit.

Measurement ensembles, two greedy recovery algorithms with per-iteration
tracing and runtime guarantee checks, restricted-isometry diagnostics, and
a Monte-Carlo experiment harness with a CSV/CLI interface.
"""

__version__ = "0.1.0"

from .ensembles import (
    ENSEMBLES,
    MeasurementMatrix,
    bernoulli,
    gaussian,
    make,
    partial_orthogonal,
    suggested_measurements,
)
from .errors import InvariantViolationError, RankDeficiencyError
from .harness import (
    CSV_HEADER,
    EXACT_RECOVERY_TOL,
    SENTINEL_NO_BOUNDARY,
    CellSpec,
    ExperimentConfig,
    ExperimentRow,
    run_and_write,
    run_cell,
    run_experiment,
    write_rows,
)
from .linalg import (
    CglsResult,
    QrState,
    mat_vec,
    qr_append,
    qr_from_columns,
    solve_ls_cgls,
    solve_ls_qr,
)
from .recovery import (
    IterationRecord,
    RecoveryResult,
    RompOptions,
    identify,
    omp,
    reconstruct,
    regularize,
    romp,
)
from .ric import (
    ProjectionReport,
    RicEstimate,
    check_local_approximation,
    check_projection_angle,
    estimate_ric,
    power_operator_norm,
    ric_report,
)
from .rng import StreamRng, derive_seed
from .signals import SparseSignal, compressible_sparse, flat_sparse, restrict

__all__ = [
    "ENSEMBLES",
    "CSV_HEADER",
    "EXACT_RECOVERY_TOL",
    "SENTINEL_NO_BOUNDARY",
    "CellSpec",
    "CglsResult",
    "ExperimentConfig",
    "ExperimentRow",
    "InvariantViolationError",
    "IterationRecord",
    "MeasurementMatrix",
    "ProjectionReport",
    "QrState",
    "RankDeficiencyError",
    "RecoveryResult",
    "RicEstimate",
    "RompOptions",
    "SparseSignal",
    "StreamRng",
    "bernoulli",
    "check_local_approximation",
    "check_projection_angle",
    "compressible_sparse",
    "derive_seed",
    "estimate_ric",
    "flat_sparse",
    "gaussian",
    "identify",
    "make",
    "mat_vec",
    "omp",
    "partial_orthogonal",
    "power_operator_norm",
    "qr_append",
    "qr_from_columns",
    "reconstruct",
    "regularize",
    "restrict",
    "ric_report",
    "romp",
    "run_and_write",
    "run_cell",
    "run_experiment",
    "solve_ls_cgls",
    "solve_ls_qr",
    "suggested_measurements",
    "write_rows",
]
