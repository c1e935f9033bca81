"""Approximate k-means and the two-stage tensor clustering pipelines.

Stage 1 estimates a subspace per mode (deflated diagonal-imputed PCA for
``hhc``, plain Gram eigenvectors for ``hsc``); stage 2 projects the mode
unfolding onto those subspaces and clusters its rows with restarted
k-means++ plus Lloyd.  ``hlloyd`` refines any assignment by alternating
block-mean estimation with nearest-block-row reassignment.

All label vectors are 1-based.  Every routine is deterministic given its
seed; distance ties always resolve to the lowest index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import _backend
from .rng import Stream, mix
from .spectral import (SpectralConfig, SubspaceEstimate, DeflationTrace,
                       select_threshold, thresholded_deflated_hetero_pca,
                       vanilla_svd_subspace)
from .tensor3 import Tensor3, matricize, mode_product

logger = logging.getLogger("heteroclust")

_KMEANS_SALT = 0x6B6D65616E73  # distinct stream per purpose
_MODE_SALT = (0x11, 0x22, 0x33)


@dataclass
class ClusterAssignment:
    """Labels in 1..k for n nodes along one mode."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.labels.ndim != 1 or self.labels.size == 0:
            raise ValueError("labels must be a nonempty 1-d array")
        if self.labels.min() < 1 or self.labels.max() > self.k:
            raise ValueError(f"labels must lie in 1..{self.k}")

    @property
    def n(self) -> int:
        return self.labels.size


@dataclass
class KMeansConfig:
    restarts: int = 10
    max_lloyd_iters: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_lloyd_iters < 1:
            raise ValueError("max_lloyd_iters must be >= 1")


@dataclass
class ClusterResult:
    """Per-mode assignments and centroids (in projected coordinates), plus
    the stage-1 subspace estimates that produced them."""

    assignments: tuple[ClusterAssignment, ClusterAssignment, ClusterAssignment]
    centroids: tuple[np.ndarray, np.ndarray, np.ndarray]
    subspaces: tuple[SubspaceEstimate, SubspaceEstimate, SubspaceEstimate]


def _seed_centroids(x, k, stream, kern):
    """k-means++ seeding: first centroid uniform, the rest by squared-distance
    sampling (first index whose cumulative mass reaches the target)."""
    n = x.shape[0]
    c = np.empty((k, x.shape[1]))
    first = int(stream.integers(1, n)[0])
    c[0] = x[first]
    d2 = kern.point_d2(x, x[first])
    for t in range(1, k):
        total = kern.seq_sum(d2)
        u = float(stream.uniform(1)[0])
        if total > 0.0:
            cum = np.cumsum(d2)
            j = int(np.searchsorted(cum, u * total, side="left"))
            j = min(j, n - 1)
        else:
            j = 0  # all points coincide with chosen centroids
        c[t] = x[j]
        d2 = np.minimum(d2, kern.point_d2(x, x[j]))
    return c


def _repair_empty(labels, d2, counts, c, x, k):
    """Move each empty cluster's centroid to the point currently farthest
    from its own centroid, stealing that point.

    Only points from multi-member clusters are eligible (k <= n guarantees
    one exists while any cluster is empty), so stealing never empties a
    cluster that was already repaired.
    """
    for ell in range(k):
        if counts[ell] == 0:
            candidates = np.where(counts[labels] > 1)[0]
            far = int(candidates[np.argmax(d2[candidates])])
            old = labels[far]
            counts[old] -= 1
            labels[far] = ell
            counts[ell] = 1
            d2[far] = 0.0
            c[ell] = x[far]
    return labels, counts


def _kmeans_single(x, k, stream, max_iters, kern):
    c = _seed_centroids(x, k, stream, kern)
    labels = None
    for _ in range(max_iters):
        new_labels, d2 = kern.assign_points(x, c)
        counts = np.bincount(new_labels, minlength=k)
        if np.any(counts == 0):
            new_labels, counts = _repair_empty(new_labels, d2, counts, c, x, k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        sums, counts = kern.centroid_sums(x, labels, k)
        c = sums / counts[:, None]
    # final pass pins the nearest-centroid property exactly
    labels, d2 = kern.assign_points(x, c)
    return labels, c, kern.seq_sum(d2)


def approx_kmeans(points: np.ndarray, k: int,
                  cfg: KMeansConfig | None = None):
    """Best-of-restarts k-means++ / Lloyd.

    Returns (assignment, centroids, objective).  The returned labels are
    exactly the nearest-centroid labels for the returned centroids (lowest
    index on ties) and the objective is the summed squared distance under
    that labeling.
    """
    if cfg is None:
        cfg = KMeansConfig()
    x = np.ascontiguousarray(points, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if n == 0:
        raise ValueError("points must be nonempty")
    if k > n:
        raise ValueError(f"k={k} exceeds number of points {n}")
    kern = _backend.kernels()
    stream = Stream(mix(cfg.seed, _KMEANS_SALT))
    best = None
    for _ in range(cfg.restarts):
        labels, c, obj = _kmeans_single(x, k, stream, cfg.max_lloyd_iters, kern)
        if best is None or obj < best[2]:
            best = (labels, c, obj)
    labels, c, obj = best
    return ClusterAssignment(labels + 1, k), c, float(obj)


def _stage1(y: Tensor3, k, scfg: SpectralConfig, use_deflation: bool):
    tau = select_threshold(y, k, scfg)
    subspaces = []
    for i in range(3):
        n_i = y.dims[i]
        if k[i] == 1:
            basis = np.full((n_i, 1), 1.0 / np.sqrt(n_i))
            subspaces.append(SubspaceEstimate(basis, 1, DeflationTrace()))
        elif use_deflation:
            subspaces.append(
                thresholded_deflated_hetero_pca(matricize(y, i + 1), k[i], tau, scfg))
        else:
            subspaces.append(vanilla_svd_subspace(matricize(y, i + 1), k[i]))
    return subspaces


def _stage2(y: Tensor3, k, subspaces, kcfg: KMeansConfig):
    assignments = []
    centroids = []
    for i in range(3):
        u = subspaces[i].basis
        u_next = subspaces[(i + 1) % 3].basis
        u_prev = subspaces[(i + 2) % 3].basis
        # U U^T M_i(Y) (U_{i+2} (x) U_{i+1}), built with mode products so the
        # big Kronecker factor is never materialized
        proj = mode_product(mode_product(y, u_next.T, ((i + 1) % 3) + 1),
                            u_prev.T, ((i + 2) % 3) + 1)
        b = matricize(proj, i + 1)
        b = u @ (u.T @ b)
        mode_cfg = KMeansConfig(restarts=kcfg.restarts,
                                max_lloyd_iters=kcfg.max_lloyd_iters,
                                seed=mix(kcfg.seed, _MODE_SALT[i]))
        assignment, c, _ = approx_kmeans(b, k[i], mode_cfg)
        assignments.append(assignment)
        centroids.append(c)
    return tuple(assignments), tuple(centroids)


def _check_k(y: Tensor3, k):
    k = tuple(int(v) for v in k)
    if len(k) != 3:
        raise ValueError("k must have three entries")
    for i in range(3):
        if not 1 <= k[i] <= y.dims[i]:
            raise ValueError(f"k[{i}]={k[i]} out of range for dim {y.dims[i]}")
    return k


def hhc(y: Tensor3, k, scfg: SpectralConfig | None = None,
        kcfg: KMeansConfig | None = None) -> ClusterResult:
    """Full pipeline with heteroskedasticity-robust subspace estimation."""
    k = _check_k(y, k)
    scfg = scfg or SpectralConfig()
    kcfg = kcfg or KMeansConfig()
    subspaces = _stage1(y, k, scfg, use_deflation=True)
    assignments, centroids = _stage2(y, k, subspaces, kcfg)
    return ClusterResult(assignments, centroids, tuple(subspaces))


def hsc(y: Tensor3, k, scfg: SpectralConfig | None = None,
        kcfg: KMeansConfig | None = None) -> ClusterResult:
    """Baseline pipeline: plain SVD subspaces, same stage 2 as :func:`hhc`."""
    k = _check_k(y, k)
    scfg = scfg or SpectralConfig()
    kcfg = kcfg or KMeansConfig()
    subspaces = _stage1(y, k, scfg, use_deflation=False)
    assignments, centroids = _stage2(y, k, subspaces, kcfg)
    return ClusterResult(assignments, centroids, tuple(subspaces))


def hlloyd(y: Tensor3, init, t_rounds: int):
    """Alternating block-mean / nearest-block-row refinement.

    Each round estimates the core tensor as per-block means of y under the
    current assignments, builds the three partial-average tensors (one mode
    kept raw, the other two collapsed to clusters), then reassigns every
    node to the core row nearest to its partial-average row.  Returns the
    refined assignments and the core estimate from the final round.

    Cells whose index set is empty keep their previous value (round 0: the
    global mean of y); occurrences are logged.
    """
    if t_rounds < 1:
        raise ValueError("t_rounds must be >= 1")
    if len(init) != 3:
        raise ValueError("init must hold one assignment per mode")
    n1, n2, n3 = y.dims
    k1, k2, k3 = (init[0].k, init[1].k, init[2].k)
    for i, a in enumerate(init):
        if a.n != y.dims[i]:
            raise ValueError(f"assignment {i + 1} has {a.n} labels for dim {y.dims[i]}")
    kern = _backend.kernels()
    gmean = float(np.cumsum(y.data.ravel())[-1]) / y.data.size
    core_flat = np.full(k1 * k2 * k3, gmean)
    part_flat = [np.full(n1 * k2 * k3, gmean),
                 np.full(k1 * n2 * k3, gmean),
                 np.full(k1 * k2 * n3, gmean)]
    zs = [a.labels.copy() for a in init]
    empty_cells = 0
    core = core_flat.reshape(k1, k2, k3)
    for _ in range(t_rounds):
        z1, z2, z3 = (zs[0] - 1, zs[1] - 1, zs[2] - 1)
        sums, counts = kern.block_sums(y.data, z1, z2, z3, k1, k2, k3)
        filled = counts > 0
        empty_cells += int(core_flat.size - filled.sum())
        core_flat = np.where(filled, sums / np.maximum(counts, 1), core_flat)
        core = core_flat.reshape(k1, k2, k3)
        parts = []
        for i, (s, c) in enumerate((
                kern.partial_sums_mode1(y.data, z2, z3, k2, k3),
                kern.partial_sums_mode2(y.data, z1, z3, k1, k3),
                kern.partial_sums_mode3(y.data, z1, z2, k1, k2))):
            filled = c > 0
            empty_cells += int(s.size - filled.sum())
            part_flat[i] = np.where(filled, s / np.maximum(c, 1), part_flat[i])
            shape = ((n1, k2, k3), (k1, n2, k3), (k1, k2, n3))[i]
            parts.append(part_flat[i].reshape(shape))
        core_t = Tensor3(core)
        for i in range(3):
            rows = matricize(Tensor3(parts[i]), i + 1)
            centroid_rows = matricize(core_t, i + 1)
            labels, _ = kern.assign_points(np.ascontiguousarray(rows),
                                           np.ascontiguousarray(centroid_rows))
            zs[i] = labels + 1
    if empty_cells:
        logger.debug("hlloyd: %d empty block cells retained previous values",
                     empty_cells)
    ks = (k1, k2, k3)
    refined = tuple(ClusterAssignment(zs[i], ks[i]) for i in range(3))
    return refined, Tensor3(core)
