"""Counter-based pseudo-random streams.

Every random draw in this package comes from a splitmix64 stream indexed by
(seed, counter).  Draws are pure functions of those two integers, so streams
can be split, replayed, and audited: the same seed always yields the same
sequence, and trial seeds derived via :func:`derive_seed` are recoverable
from their parts.

Gaussians use the Box-Muller transform on consecutive uniform pairs.
"""

from __future__ import annotations

import numpy as np

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
# 2^-53; uniforms carry the top 53 bits of the hashed counter
_U53 = 1.0 / 9007199254740992.0


def _splitmix64_int(x: int) -> int:
    m = 0xFFFFFFFFFFFFFFFF
    z = (x + 0x9E3779B97F4A7C15) & m
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & m
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & m
    return z ^ (z >> 31)


def splitmix64(x):
    """Finalizer of the splitmix64 generator (elementwise on arrays)."""
    if isinstance(x, (int, np.integer)):  # scalar path avoids numpy overflow warnings
        return np.uint64(_splitmix64_int(int(x) & 0xFFFFFFFFFFFFFFFF))
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> np.uint64(30))) * _MIX1) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * _MIX2) & _MASK
    return z ^ (z >> np.uint64(31))


def mix(*parts: int) -> int:
    """Fold integers into one 64-bit seed (order-sensitive)."""
    acc = 0
    for p in parts:
        acc = _splitmix64_int(acc ^ (int(p) & 0xFFFFFFFFFFFFFFFF))
    return acc


def derive_seed(base_seed: int, value: float, trial: int) -> int:
    """Per-trial seed: base_seed XOR mix(float64 bits of value, trial).

    This is the formula behind the ``seed`` column of experiment CSVs.
    """
    bits = int(np.float64(value).view(np.uint64))
    return (base_seed & 0xFFFFFFFFFFFFFFFF) ^ mix(bits, trial)


class Stream:
    """Sequential view over the counter-based generator.

    Each draw consumes counters ``counter .. counter+m-1``; the raw word for
    counter ``c`` is ``splitmix64(seed + c * GOLDEN)``.
    """

    __slots__ = ("seed", "counter")

    def __init__(self, seed: int):
        self.seed = np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF)
        self.counter = 0

    def raw(self, n: int) -> np.ndarray:
        idx = np.arange(self.counter, self.counter + n, dtype=np.uint64)
        self.counter += n
        return splitmix64((self.seed + idx * _GOLDEN) & _MASK)

    def uniform(self, n: int) -> np.ndarray:
        """n uniforms in [0, 1)."""
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _U53

    def uniform_open(self, n: int) -> np.ndarray:
        """n uniforms in (0, 1]; safe as a log() argument."""
        z = (self.raw(n) >> np.uint64(11)).astype(np.float64)
        return (z + 1.0) * _U53

    def normal(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on consecutive uniform pairs."""
        m = (n + 1) // 2
        r = np.sqrt(-2.0 * np.log(self.uniform_open(m)))
        theta = (2.0 * np.pi) * self.uniform(m)
        out = np.empty(2 * m)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def integers(self, n: int, upper: int) -> np.ndarray:
        """n integers uniform on [0, upper)."""
        if upper <= 0:
            raise ValueError("upper must be positive")
        v = (self.uniform(n) * upper).astype(np.int64)
        return np.minimum(v, upper - 1)

    def permutation(self, n: int) -> np.ndarray:
        """Permutation of range(n) by sorting one block of uniforms."""
        return np.argsort(self.uniform(n), kind="stable")
