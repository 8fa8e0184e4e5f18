"""Dense kernels and the two least-squares strategies used by the pursuits.

Least-squares solves come in two interchangeable flavours:

* an incremental QR factorization grown one column at a time with Modified
  Gram-Schmidt (cheap when the selected column set only ever grows), and
* CGLS, conjugate gradient on the normal equations without forming them
  (cheap when the column subsets are near-isometries).

Both satisfy the same optimality contract: the residual of a solve is
orthogonal to every selected column up to a small relative tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficiencyError

# Remainder-norm drop that triggers a second Gram-Schmidt sweep.
REORTH_THRESHOLD = 0.7
# Relative remainder norm below which an appended column counts as dependent.
RANK_TOL = 1e-12


def mat_vec(a: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Dense matrix-vector product with shape checking."""
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if z.shape != (a.shape[1],):
        raise ValueError(f"dimension mismatch: {a.shape} @ {z.shape}")
    return a @ z


@dataclass(frozen=True)
class QrState:
    """Thin QR factorization of an incrementally grown column set.

    ``q`` has orthonormal columns (rows x k), ``r`` is upper triangular
    (k x k), and ``q @ r`` reproduces the appended columns in order.
    """

    q: np.ndarray
    r: np.ndarray

    @classmethod
    def empty(cls, nrows: int) -> "QrState":
        return cls(q=np.zeros((nrows, 0)), r=np.zeros((0, 0)))

    @property
    def nrows(self) -> int:
        return self.q.shape[0]

    @property
    def ncols(self) -> int:
        return self.q.shape[1]


def qr_append(state: QrState, col: np.ndarray) -> QrState:
    """Append a column via Modified Gram-Schmidt, reorthogonalizing once.

    Raises :class:`RankDeficiencyError` if the column is numerically in the
    span of the existing ones (relative remainder below ``RANK_TOL``), or if
    the factorization is already full (k = rows).
    """
    col = np.asarray(col, dtype=float)
    n, k = state.nrows, state.ncols
    if col.shape != (n,):
        raise ValueError(f"column length {col.shape} does not match rows {n}")
    if k >= n:
        raise RankDeficiencyError(f"cannot append a {k + 1}-th column to a {n}-row basis")

    col_norm = float(np.linalg.norm(col))
    w = col.copy()
    h = state.q.T @ w
    w -= state.q @ h
    if np.linalg.norm(w) < REORTH_THRESHOLD * col_norm:
        # Twice-is-enough safeguard against cancellation in a single sweep.
        g = state.q.T @ w
        w -= state.q @ g
        h += g
    w_norm = float(np.linalg.norm(w))
    if w_norm < RANK_TOL * col_norm or col_norm == 0.0:
        raise RankDeficiencyError(
            f"appended column is dependent (remainder {w_norm:.3e} vs norm {col_norm:.3e})"
        )

    q_new = np.column_stack([state.q, w / w_norm])
    r_new = np.zeros((k + 1, k + 1))
    r_new[:k, :k] = state.r
    r_new[:k, k] = h
    r_new[k, k] = w_norm
    return QrState(q=q_new, r=r_new)


def solve_ls_qr(state: QrState, x: np.ndarray) -> np.ndarray:
    """Least-squares coefficients for the stored columns: R y = Q* x."""
    if state.ncols == 0:
        raise ValueError("cannot solve against an empty factorization")
    x = np.asarray(x, dtype=float)
    rhs = state.q.T @ x
    k = state.ncols
    y = np.zeros(k)
    for i in range(k - 1, -1, -1):
        y[i] = (rhs[i] - state.r[i, i + 1 :] @ y[i + 1 :]) / state.r[i, i]
    return y


@dataclass(frozen=True)
class CglsResult:
    y: np.ndarray
    iterations: int
    converged: bool


def solve_ls_cgls(a: np.ndarray, x: np.ndarray, tol: float = 1e-10, max_iter: int = 200) -> CglsResult:
    """CGLS: conjugate gradient on the normal equations, matrix free.

    Stops when ``||A^T (x - A y)|| <= tol * ||A^T x||`` or after ``max_iter``
    steps; hitting the cap flags the result instead of raising.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    a = np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape != (a.shape[0],):
        raise ValueError(f"dimension mismatch: {a.shape} vs {x.shape}")

    y = np.zeros(a.shape[1])
    residual = x.copy()
    s = a.T @ residual
    threshold = tol * float(np.linalg.norm(s))
    if threshold == 0.0:
        return CglsResult(y=y, iterations=0, converged=True)
    p = s.copy()
    gamma = float(s @ s)
    for iteration in range(1, max_iter + 1):
        q = a @ p
        qq = float(q @ q)
        if qq == 0.0:
            return CglsResult(y=y, iterations=iteration - 1, converged=False)
        alpha = gamma / qq
        y += alpha * p
        residual -= alpha * q
        s = a.T @ residual
        gamma_new = float(s @ s)
        if np.sqrt(gamma_new) <= threshold:
            return CglsResult(y=y, iterations=iteration, converged=True)
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
    return CglsResult(y=y, iterations=max_iter, converged=False)


def qr_from_columns(a: np.ndarray) -> QrState:
    """Factor a full column set by repeated appends."""
    a = np.asarray(a, dtype=float)
    state = QrState.empty(a.shape[0])
    for j in range(a.shape[1]):
        state = qr_append(state, a[:, j])
    return state
