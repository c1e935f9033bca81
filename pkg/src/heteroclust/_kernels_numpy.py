"""Pure-numpy implementations of the hot kernels.

These mirror :mod:`heteroclust._kernels_numba` operation for operation.  The
reductions below accumulate in the same order as the jitted loops (column
loops over the small trailing dimension, bincount over scan order), so both
backends return bit-identical arrays and every downstream tie-break decides
identically.
"""

from __future__ import annotations

import numpy as np


def assign_points(x, c):
    """Label each row of x with the nearest row of c (ties: lowest index).

    Returns (labels int64, squared distance to the winning row).
    """
    n = x.shape[0]
    k = c.shape[0]
    d2 = np.empty((n, k))
    for ell in range(k):
        acc = np.zeros(n)
        for t in range(x.shape[1]):
            diff = x[:, t] - c[ell, t]
            acc += diff * diff
        d2[:, ell] = acc
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(n), labels]


def point_d2(x, p):
    """Squared distances from each row of x to the single point p."""
    acc = np.zeros(x.shape[0])
    for t in range(x.shape[1]):
        diff = x[:, t] - p[t]
        acc += diff * diff
    return acc


def centroid_sums(x, labels, k):
    """Per-label coordinate sums and member counts."""
    d = x.shape[1]
    sums = np.empty((k, d))
    for t in range(d):
        sums[:, t] = np.bincount(labels, weights=x[:, t], minlength=k)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    return sums, counts


def seq_sum(v):
    """Left-to-right float sum (cumsum is sequential, unlike np.sum)."""
    if v.size == 0:
        return 0.0
    return float(np.cumsum(v)[-1])


def block_sums(y, z1, z2, z3, k1, k2, k3):
    """Sum/count of y entries per (z1,z2,z3) cluster cell, flat C order."""
    idx = (z1[:, None, None] * k2 + z2[None, :, None]) * k3 + z3[None, None, :]
    flat = idx.ravel()
    m = k1 * k2 * k3
    sums = np.bincount(flat, weights=y.ravel(), minlength=m)
    counts = np.bincount(flat, minlength=m).astype(np.int64)
    return sums, counts


def partial_sums_mode1(y, z2, z3, k2, k3):
    """Sum/count per (j1, z2-cell, z3-cell), flat C order over (n1,k2,k3)."""
    n1 = y.shape[0]
    idx = (np.arange(n1)[:, None, None] * k2 + z2[None, :, None]) * k3 + z3[None, None, :]
    m = n1 * k2 * k3
    sums = np.bincount(idx.ravel(), weights=y.ravel(), minlength=m)
    counts = np.bincount(idx.ravel(), minlength=m).astype(np.int64)
    return sums, counts


def partial_sums_mode2(y, z1, z3, k1, k3):
    n2 = y.shape[1]
    idx = (z1[:, None, None] * n2 + np.arange(n2)[None, :, None]) * k3 + z3[None, None, :]
    m = k1 * n2 * k3
    sums = np.bincount(idx.ravel(), weights=y.ravel(), minlength=m)
    counts = np.bincount(idx.ravel(), minlength=m).astype(np.int64)
    return sums, counts


def partial_sums_mode3(y, z1, z2, k1, k2):
    n3 = y.shape[2]
    idx = (z1[:, None, None] * k2 + z2[None, :, None]) * n3 + np.arange(n3)[None, None, :]
    m = k1 * k2 * n3
    sums = np.bincount(idx.ravel(), weights=y.ravel(), minlength=m)
    counts = np.bincount(idx.ravel(), minlength=m).astype(np.int64)
    return sums, counts
