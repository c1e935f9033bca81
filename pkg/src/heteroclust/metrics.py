"""Clustering evaluation metrics and model diagnostics.

Two error measures: the misclassification rate (best label matching over
all cluster permutations, solved as an assignment problem) and the
clustering error rate 1 - ARI (pair-counting, label-free).  Diagnostics
cover row separation of a core tensor, signal-to-noise ratio, and cluster
size balance.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clustering import ClusterAssignment
from .tensor3 import Tensor3, matricize

logger = logging.getLogger("heteroclust")


def mcr(z: ClusterAssignment, zhat: ClusterAssignment) -> float:
    """Misclassification rate: smallest mismatch fraction over all
    relabelings of zhat's clusters; 0 iff the two partitions agree."""
    if z.n != zhat.n:
        raise ValueError(f"length mismatch: {z.n} vs {zhat.n}")
    if z.k != zhat.k:
        raise ValueError(f"cluster count mismatch: {z.k} vs {zhat.k}")
    confusion = np.zeros((z.k, z.k))
    np.add.at(confusion, (z.labels - 1, zhat.labels - 1), 1.0)
    rows, cols = linear_sum_assignment(-confusion)
    return float(1.0 - confusion[rows, cols].sum() / z.n)


def _pair_counts(x: np.ndarray) -> np.ndarray:
    return x * (x - 1.0) / 2.0


def adjusted_rand_index(z: ClusterAssignment, zhat: ClusterAssignment) -> float:
    """Pair-counting ARI; 1 for identical partitions, 0 expected at chance."""
    if z.n != zhat.n:
        raise ValueError(f"length mismatch: {z.n} vs {zhat.n}")
    contingency = np.zeros((z.k, zhat.k))
    np.add.at(contingency, (z.labels - 1, zhat.labels - 1), 1.0)
    together = _pair_counts(contingency).sum()
    a = _pair_counts(contingency.sum(axis=1)).sum()
    b = _pair_counts(contingency.sum(axis=0)).sum()
    total = _pair_counts(np.float64(z.n))
    expected = a * b / total if total > 0 else 0.0
    denom = (a + b) / 2.0 - expected
    if denom == 0.0:  # both partitions trivial; identical by construction
        return 1.0
    return float((together - expected) / denom)


def cer(z: ClusterAssignment, zhat: ClusterAssignment) -> float:
    """Clustering error rate, 1 - ARI."""
    return 1.0 - adjusted_rand_index(z, zhat)


def separation_delta(core: Tensor3) -> tuple[float, float, float, float]:
    """Minimum pairwise row distance of each mode unfolding of the core,
    plus the overall minimum.  Modes with a single cluster report inf and
    are excluded from the minimum (all-trivial cores give inf overall)."""
    deltas = []
    for mode in (1, 2, 3):
        m = matricize(core, mode)
        kk = m.shape[0]
        if kk < 2:
            deltas.append(np.inf)
            continue
        diff = m[:, None, :] - m[None, :, :]
        d2 = np.einsum("ijt,ijt->ij", diff, diff)
        iu = np.triu_indices(kk, k=1)
        deltas.append(float(np.sqrt(d2[iu].min())))
    finite = [d for d in deltas if np.isfinite(d)]
    d_min = min(finite) if finite else np.inf
    return deltas[0], deltas[1], deltas[2], d_min


def noise_omega_max(core: Tensor3, noise) -> float:
    """Largest entrywise noise standard deviation implied by a noise spec."""
    if noise.kind == "heteroskedastic_gaussian":
        return float(np.prod([s.max() for s in noise.mode_scales]))
    if noise.kind == "bernoulli":
        p = core.data
        return float(np.sqrt((p * (1.0 - p)).max()))
    return 0.0


def snr(core: Tensor3, noise) -> float:
    """Separation-to-noise ratio delta_min / omega_max."""
    omega = noise_omega_max(core, noise)
    if omega <= 0.0:
        raise ValueError("omega_max must be positive to form an SNR")
    return separation_delta(core)[3] / omega


def balance_beta(z: ClusterAssignment) -> float:
    """Cluster size balance: k * (smallest cluster size) / n, in (0, 1].
    An empty cluster yields 0 (logged)."""
    counts = np.bincount(z.labels - 1, minlength=z.k)
    smallest = int(counts.min())
    if smallest == 0:
        logger.warning("balance_beta: empty cluster present, returning 0")
        return 0.0
    return float(z.k * smallest / z.n)
