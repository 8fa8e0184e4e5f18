"""Random measurement ensembles with their isometry normalizations.

Three families are provided: dense subgaussian matrices (Gaussian or
symmetric Bernoulli entries, scaled by 1/sqrt(N)) and partial bounded
orthogonal matrices (N rows drawn without replacement from an orthonormal
DCT-II or Hadamard matrix, scaled by sqrt(d/N)).  The partial-Fourier
construction is kept real by using the DCT, whose entries obey the same
O(1/sqrt(d)) bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import StreamRng

ENSEMBLES = ("gaussian", "bernoulli", "partial_orthogonal")
TRANSFORMS = ("dct", "hadamard")


@dataclass(frozen=True)
class MeasurementMatrix:
    """An N x d measurement operator, dense and immutable.

    ``matrix`` already carries the ensemble normalization recorded in
    ``scale``; ``row_indices`` lists the selected rows of the underlying
    orthogonal transform for the partial_orthogonal family.
    """

    n_measurements: int
    dim: int
    ensemble: str
    scale: float
    seed: int
    matrix: np.ndarray = field(repr=False)
    transform_kind: str | None = None
    row_indices: np.ndarray | None = field(default=None, repr=False)

    def apply(self, z: np.ndarray) -> np.ndarray:
        """Phi @ z."""
        return self.matrix @ np.asarray(z, dtype=float)

    def adjoint_apply(self, r: np.ndarray) -> np.ndarray:
        """Phi^T @ r, the correlation of r with every column."""
        return self.matrix.T @ np.asarray(r, dtype=float)

    def columns(self, idx) -> np.ndarray:
        """Dense submatrix of the selected columns, in the given order."""
        return self.matrix[:, np.asarray(idx, dtype=np.int64)]


def _check_shape(n_measurements: int, dim: int) -> None:
    if n_measurements < 1 or dim < 1:
        raise ValueError(f"need positive sizes, got N={n_measurements}, d={dim}")


def gaussian(n_measurements: int, dim: int, seed: int) -> MeasurementMatrix:
    """i.i.d. standard normal entries scaled by 1/sqrt(N)."""
    _check_shape(n_measurements, dim)
    rng = StreamRng(seed)
    scale = 1.0 / math.sqrt(n_measurements)
    entries = rng.normal(n_measurements * dim).reshape(n_measurements, dim)
    return MeasurementMatrix(
        n_measurements=n_measurements,
        dim=dim,
        ensemble="gaussian",
        scale=scale,
        seed=seed,
        matrix=scale * entries,
    )


def bernoulli(n_measurements: int, dim: int, seed: int) -> MeasurementMatrix:
    """Uniform +/-1 entries scaled by 1/sqrt(N); every column has norm 1."""
    _check_shape(n_measurements, dim)
    rng = StreamRng(seed)
    scale = 1.0 / math.sqrt(n_measurements)
    entries = rng.signs(n_measurements * dim).reshape(n_measurements, dim)
    return MeasurementMatrix(
        n_measurements=n_measurements,
        dim=dim,
        ensemble="bernoulli",
        scale=scale,
        seed=seed,
        matrix=scale * entries,
    )


def _dct_rows(dim: int, rows: np.ndarray) -> np.ndarray:
    # Orthonormal DCT-II rows: entries bounded by sqrt(2/d).
    j = np.arange(dim)
    k = rows[:, None].astype(float)
    mat = np.cos(np.pi * (2 * j + 1) * k / (2 * dim)) * math.sqrt(2.0 / dim)
    mat[rows == 0, :] = math.sqrt(1.0 / dim)
    return mat


def _hadamard_rows(dim: int, rows: np.ndarray) -> np.ndarray:
    # Sylvester Hadamard rows without materializing the full d x d matrix:
    # H[k, j] = (-1)^{popcount(k & j)}, normalized by 1/sqrt(d).
    j = np.arange(dim, dtype=np.uint64)
    k = rows.astype(np.uint64)[:, None]
    bits = np.bitwise_and(k, j)
    parity = np.zeros_like(bits)
    width = int(dim - 1).bit_length()
    for shift in range(width):
        parity ^= (bits >> np.uint64(shift)) & np.uint64(1)
    return np.where(parity == 1, -1.0, 1.0) / math.sqrt(dim)


def partial_orthogonal(
    n_measurements: int, dim: int, transform_kind: str = "dct", seed: int = 0
) -> MeasurementMatrix:
    """N distinct rows of an orthonormal transform, scaled by sqrt(d/N)."""
    _check_shape(n_measurements, dim)
    if n_measurements > dim:
        raise ValueError(f"partial orthogonal needs N <= d, got N={n_measurements}, d={dim}")
    if transform_kind not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform_kind!r}, expected one of {TRANSFORMS}")
    if transform_kind == "hadamard" and dim & (dim - 1) != 0:
        raise ValueError(f"hadamard transform needs a power-of-two dimension, got d={dim}")

    rng = StreamRng(seed)
    rows = np.sort(rng.subset(dim, n_measurements))
    build = _dct_rows if transform_kind == "dct" else _hadamard_rows
    scale = math.sqrt(dim / n_measurements)
    return MeasurementMatrix(
        n_measurements=n_measurements,
        dim=dim,
        ensemble="partial_orthogonal",
        scale=scale,
        seed=seed,
        matrix=scale * build(dim, rows),
        transform_kind=transform_kind,
        row_indices=rows,
    )


def make(ensemble: str, n_measurements: int, dim: int, seed: int,
         transform_kind: str = "dct") -> MeasurementMatrix:
    """Construct any ensemble by name."""
    if ensemble == "gaussian":
        return gaussian(n_measurements, dim, seed)
    if ensemble == "bernoulli":
        return bernoulli(n_measurements, dim, seed)
    if ensemble == "partial_orthogonal":
        return partial_orthogonal(n_measurements, dim, transform_kind, seed)
    raise ValueError(f"unknown ensemble {ensemble!r}, expected one of {ENSEMBLES}")


def suggested_measurements(
    sparsity: int, dim: int, ensemble: str, epsilon: float, big_c: float = 1.0
) -> int:
    """Heuristic measurement budget for an isometry constant ``epsilon``.

    Evaluates the known sufficient-condition formulas with natural logs and
    a user-supplied leading constant (the true constant is not pinned down
    by the theory, so treat the output as a starting point, not a bound).
    Subgaussian ensembles use N >= (C n / eps^2) log(d / (eps^2 n));
    partial orthogonal ones use the iterated-log bound
    N >= C (n log d / eps^2) log(n log d / eps^2) log^2 d, which grows like
    n log^5 d at the eps ~ 1/sqrt(log n) scale relevant for greedy recovery.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if not 1 <= sparsity <= dim:
        raise ValueError(f"need 1 <= n <= d, got n={sparsity}, d={dim}")
    if big_c <= 0:
        raise ValueError(f"C must be positive, got {big_c}")

    if ensemble in ("gaussian", "bernoulli"):
        value = (big_c * sparsity / epsilon**2) * math.log(dim / (epsilon**2 * sparsity))
    elif ensemble == "partial_orthogonal":
        if dim < 2:
            raise ValueError("partial orthogonal budget needs d >= 2")
        inner = sparsity * math.log(dim) / epsilon**2
        value = big_c * inner * math.log(inner) * math.log(dim) ** 2
    else:
        raise ValueError(f"unknown ensemble {ensemble!r}, expected one of {ENSEMBLES}")
    return math.ceil(value)
