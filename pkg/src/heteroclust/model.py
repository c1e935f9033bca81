"""Tensor block model ground truth and simulation generators.

A block model is a core tensor (one mean per cluster cell), one cluster
assignment per mode, and a noise description.  Two generators reproduce the
standard simulation designs: Gaussian noise whose standard deviation factors
as alpha_i * beta_j * gamma_k over the three modes, and Bernoulli
observations whose success probability is the core cell itself.

Generators are pure functions of their seed (see :mod:`heteroclust.rng`);
the same seed gives bit-identical output on any platform with the same
numpy build.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .clustering import ClusterAssignment
from .metrics import separation_delta
from .rng import Stream, mix
from .tensor3 import Tensor3

logger = logging.getLogger("heteroclust")

_NOISE_KINDS = ("heteroskedastic_gaussian", "bernoulli", "none")


@dataclass
class NoiseSpec:
    """Noise model attached to a ground truth.

    mode_scales holds the per-mode std factors (alpha, beta, gamma) for the
    Gaussian kind and is None otherwise.
    """

    kind: str
    mode_scales: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise ValueError(f"kind must be one of {_NOISE_KINDS}")
        if self.kind == "heteroskedastic_gaussian":
            if self.mode_scales is None or len(self.mode_scales) != 3:
                raise ValueError("heteroskedastic_gaussian requires three scale arrays")
            scales = tuple(np.asarray(s, dtype=np.float64) for s in self.mode_scales)
            for s in scales:
                if s.ndim != 1 or np.any(s < 0):
                    raise ValueError("scale arrays must be 1-d and nonnegative")
            self.mode_scales = scales


@dataclass
class BlockModel:
    """Ground truth: core tensor, per-mode assignments, noise description."""

    core: Tensor3
    assignments: tuple[ClusterAssignment, ClusterAssignment, ClusterAssignment]
    noise: NoiseSpec

    def __post_init__(self):
        ks = tuple(a.k for a in self.assignments)
        if self.core.dims != ks:
            raise ValueError(f"core dims {self.core.dims} do not match cluster "
                             f"counts {ks}")
        if self.noise.kind == "bernoulli":
            c = self.core.data
            if c.min() < 0.0 or c.max() > 1.0:
                raise ValueError("bernoulli core entries must lie in [0, 1]")
        if self.noise.kind == "heteroskedastic_gaussian":
            ns = tuple(a.n for a in self.assignments)
            got = tuple(s.size for s in self.noise.mode_scales)
            if got != ns:
                raise ValueError(f"scale lengths {got} do not match mode sizes {ns}")


def membership_matrix(z: ClusterAssignment) -> np.ndarray:
    """n x k binary matrix with row j carrying a single 1 at column z_j."""
    m = np.zeros((z.n, z.k))
    m[np.arange(z.n), z.labels - 1] = 1.0
    return m


def assemble_signal(bm: BlockModel, dims: tuple[int, int, int]) -> Tensor3:
    """Noise-free tensor: entry (i, j, l) is the core cell selected by the
    three cluster labels of i, j and l."""
    ns = tuple(a.n for a in bm.assignments)
    if tuple(dims) != ns:
        raise ValueError(f"dims {tuple(dims)} do not match assignment lengths {ns}")
    z1, z2, z3 = (a.labels - 1 for a in bm.assignments)
    return Tensor3(bm.core.data[np.ix_(z1, z2, z3)])


def _draw_assignment(stream: Stream, n: int, k: int, balanced: bool) -> ClusterAssignment:
    if balanced:
        base = np.tile(np.arange(1, k + 1), n // k + 1)[:n]
        return ClusterAssignment(base[stream.permutation(n)], k)
    while True:  # uniform labels, redrawn until every cluster is hit
        labels = stream.integers(n, k) + 1
        if np.unique(labels).size == k:
            return ClusterAssignment(labels, k)


def generate_subgaussian_tbm(n: int, k: int, delta: float, seed: int,
                             balanced: bool = False):
    """Cubic block model with heteroskedastic Gaussian noise.

    The core is standard normal rescaled so its minimum pairwise row
    separation equals 40 * n**-delta; per-mode noise scales are uniform on
    [0, 2].  Returns (observed tensor, ground truth).
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    stream = Stream(seed)
    sub = 0
    while True:
        core_raw = stream.normal(k ** 3).reshape(k, k, k)
        dmin = separation_delta(Tensor3(core_raw))[3]
        if np.isfinite(dmin) and dmin > 0:
            break
        if not np.isfinite(dmin):  # k == 1: no separation to normalize
            break
        sub += 1
        logger.debug("degenerate core draw (delta_min=0), redrawing (%d)", sub)
    if np.isfinite(dmin):
        core = Tensor3(core_raw * (40.0 * n ** (-delta) / dmin))
    else:
        core = Tensor3(core_raw)
    assignments = tuple(_draw_assignment(stream, n, k, balanced) for _ in range(3))
    scales = tuple(stream.uniform(n) * 2.0 for _ in range(3))
    noise = NoiseSpec("heteroskedastic_gaussian", scales)
    truth = BlockModel(core, assignments, noise)
    x = assemble_signal(truth, (n, n, n)).data
    e = stream.normal(n ** 3).reshape(n, n, n)
    e = e * scales[0][:, None, None] * scales[1][None, :, None] * scales[2][None, None, :]
    return Tensor3(x + e), truth


def stochastic_core(n: int, k: int, a: float) -> Tensor3:
    """Probability core: diagonal cells 10a * n^-1.5 * (1 - (i-1)/(2(k-1))),
    off-diagonal cells 0.1a * n^-1.5."""
    if a <= 0:
        raise ValueError("a must be positive")
    base = a * n ** (-1.5)
    core = np.full((k, k, k), 0.1 * base)
    for i in range(k):
        taper = 1.0 - i / (2.0 * (k - 1)) if k > 1 else 1.0
        core[i, i, i] = 10.0 * base * taper
    if core.max() > 1.0 or core.min() < 0.0:
        raise ValueError(f"a={a} pushes probabilities outside [0, 1] at n={n}")
    return Tensor3(core)


def generate_stochastic_tbm(n: int, k: int, a: float, seed: int,
                            balanced: bool = False):
    """Cubic block model with Bernoulli observations (probability = core
    cell).  Returns (observed binary tensor, ground truth)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    core = stochastic_core(n, k, a)
    stream = Stream(seed)
    assignments = tuple(_draw_assignment(stream, n, k, balanced) for _ in range(3))
    truth = BlockModel(core, assignments, NoiseSpec("bernoulli"))
    p = assemble_signal(truth, (n, n, n)).data
    u = stream.uniform(n ** 3).reshape(n, n, n)
    return Tensor3((u < p).astype(np.float64)), truth
