"""Exact sparse test signals: flat and power-law-decaying families."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import StreamRng


@dataclass(frozen=True)
class SparseSignal:
    """An exactly sparse vector stored as (support, values).

    Support indices are strictly increasing and every stored value is
    nonzero; the empty signal has empty support.
    """

    dim: int
    support: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "values", values)
        if support.shape != values.shape or support.ndim != 1:
            raise ValueError("support and values must be aligned 1-D arrays")
        if support.size > self.dim:
            raise ValueError(f"support larger than dimension {self.dim}")
        if support.size:
            if (np.diff(support) <= 0).any():
                raise ValueError("support indices must be strictly increasing")
            if support[0] < 0 or support[-1] >= self.dim:
                raise ValueError("support indices out of range")
            if (values == 0).any():
                raise ValueError("stored values must be nonzero")

    @property
    def sparsity(self) -> int:
        return int(self.support.size)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim)
        dense[self.support] = self.values
        return dense

    def to_json_dict(self) -> dict:
        return {
            "d": self.dim,
            "support": self.support.tolist(),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, record: dict) -> "SparseSignal":
        return cls(dim=record["d"], support=record["support"], values=record["values"])

    @classmethod
    def from_dense(cls, dense: np.ndarray) -> "SparseSignal":
        dense = np.asarray(dense, dtype=float)
        support = np.flatnonzero(dense)
        return cls(dim=dense.size, support=support, values=dense[support])


def _sorted_signal(dim: int, support_draw: np.ndarray, values_draw: np.ndarray) -> SparseSignal:
    order = np.argsort(support_draw)
    return SparseSignal(dim=dim, support=support_draw[order], values=values_draw[order])


def flat_sparse(dim: int, sparsity: int, seed: int) -> SparseSignal:
    """Uniformly random support with every nonzero component set to 1."""
    if not 1 <= sparsity <= dim:
        raise ValueError(f"need 1 <= n <= d, got n={sparsity}, d={dim}")
    rng = StreamRng(seed)
    support = rng.subset(dim, sparsity)
    return _sorted_signal(dim, support, np.ones(sparsity))


def compressible_sparse(
    dim: int, sparsity: int, p: float, seed: int, assign: str = "draw_order"
) -> SparseSignal:
    """Random support with the i-th component set to +/- i^(-1/p).

    The decaying magnitude i^(-1/p) is attached to the i-th support position
    in the order the positions were drawn (``assign="draw_order"``); pass
    ``assign="sorted_order"`` to rank magnitudes by ascending index instead.
    Signs are independent uniform +/-1, drawn after the support.
    """
    if not 0 < p < 1:
        raise ValueError(f"decay exponent p must lie in (0, 1), got {p}")
    if not 1 <= sparsity <= dim:
        raise ValueError(f"need 1 <= n <= d, got n={sparsity}, d={dim}")
    if assign not in ("draw_order", "sorted_order"):
        raise ValueError(f"unknown assignment order {assign!r}")
    rng = StreamRng(seed)
    support = rng.subset(dim, sparsity)
    if assign == "sorted_order":
        support = np.sort(support)
    magnitudes = np.arange(1, sparsity + 1, dtype=float) ** (-1.0 / p)
    values = magnitudes * rng.signs(sparsity)
    return _sorted_signal(dim, support, values)


def restrict(signal: SparseSignal, keep) -> SparseSignal:
    """Zero out every component whose index is not in ``keep``."""
    keep = np.asarray(sorted(set(int(i) for i in keep)), dtype=np.int64)
    if keep.size and (keep[0] < 0 or keep[-1] >= signal.dim):
        raise ValueError("keep indices out of range")
    mask = np.isin(signal.support, keep)
    return SparseSignal(dim=signal.dim, support=signal.support[mask], values=signal.values[mask])
