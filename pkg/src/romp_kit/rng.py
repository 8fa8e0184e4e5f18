"""Seedable random streams with a version-stable bit source.

All randomness in the toolkit flows through :class:`StreamRng`, which draws
raw 64-bit words from a PCG64 bit generator and derives floats itself
(uniforms from the top 53 bits, normals via Box-Muller).  numpy guarantees
the raw PCG64 stream across versions, so matrices, signals and probe sets
are bit-reproducible for a given seed; floating-point post-processing is
consistent within a build.
"""

from __future__ import annotations

import hashlib

import numpy as np

_U64_MASK = (1 << 64) - 1
_INV_2_53 = 2.0**-53


def derive_seed(master: int, *tokens) -> int:
    """Derive an independent 64-bit seed as ``master XOR hash(tokens)``.

    The hash is SHA-256 based, so derived streams are stable across runs,
    platforms and Python processes (unlike builtin ``hash``).
    """
    text = "\x1f".join(str(t) for t in tokens)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return (int(master) ^ int.from_bytes(digest[:8], "little")) & _U64_MASK


class StreamRng:
    """PCG64-backed stream exposing only portable derivations."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _U64_MASK
        self._bg = np.random.PCG64(self.seed)

    def raw(self, size: int) -> np.ndarray:
        return self._bg.random_raw(size)

    def raw_one(self) -> int:
        return int(self._bg.random_raw())

    def uniform_open(self, size: int) -> np.ndarray:
        """Uniforms in (0, 1], safe as Box-Muller log arguments."""
        return ((self.raw(size) >> np.uint64(11)) + 1) * _INV_2_53

    def uniform(self, size: int) -> np.ndarray:
        """Uniforms in [0, 1)."""
        return (self.raw(size) >> np.uint64(11)) * _INV_2_53

    def normal(self, size: int) -> np.ndarray:
        """Standard normals via Box-Muller on the raw uniform stream."""
        half = (size + 1) // 2
        u1 = self.uniform_open(half)
        u2 = self.uniform(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        out = np.concatenate([radius * np.cos(theta), radius * np.sin(theta)])
        return out[:size]

    def signs(self, size: int) -> np.ndarray:
        """Uniform +/-1 values."""
        bits = self.raw(size) & np.uint64(1)
        return np.where(bits == 1, 1.0, -1.0)

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) by masked rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1 if bound > 1 else 0
        while True:
            candidate = self.raw_one() & mask
            if candidate < bound:
                return candidate

    def subset(self, population: int, k: int) -> np.ndarray:
        """k distinct indices from range(population), partial Fisher-Yates.

        The first ``k`` draws depend only on the first ``k`` stream steps,
        so for a fixed stream the result for ``k`` is a prefix of the result
        for any larger ``k`` (used for nested isometry probes).
        """
        if not 0 <= k <= population:
            raise ValueError(f"cannot sample {k} of {population}")
        swapped: dict[int, int] = {}
        picks = np.empty(k, dtype=np.int64)
        for i in range(k):
            j = i + self.below(population - i)
            picks[i] = swapped.get(j, j)
            swapped[j] = swapped.get(i, i)
        return picks
