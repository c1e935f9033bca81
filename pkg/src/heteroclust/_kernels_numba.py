"""Jitted implementations of the hot kernels.

Same contracts as :mod:`heteroclust._kernels_numpy`; accumulation order is
kept identical so both backends agree bit for bit.  Importing this module
requires numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def assign_points(x, c):
    n, d = x.shape
    k = c.shape[0]
    labels = np.empty(n, dtype=np.int64)
    best_d2 = np.empty(n)
    for i in range(n):
        best = np.inf
        bl = 0
        for ell in range(k):
            s = 0.0
            for t in range(d):
                diff = x[i, t] - c[ell, t]
                s += diff * diff
            if s < best:
                best = s
                bl = ell
        labels[i] = bl
        best_d2[i] = best
    return labels, best_d2


@njit(cache=True)
def point_d2(x, p):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for t in range(d):
            diff = x[i, t] - p[t]
            s += diff * diff
        out[i] = s
    return out


@njit(cache=True)
def centroid_sums(x, labels, k):
    n, d = x.shape
    sums = np.zeros((k, d))
    counts = np.zeros(k, dtype=np.int64)
    for i in range(n):
        ell = labels[i]
        counts[ell] += 1
        for t in range(d):
            sums[ell, t] += x[i, t]
    return sums, counts


@njit(cache=True)
def seq_sum(v):
    s = 0.0
    for i in range(v.size):
        s += v[i]
    return s


@njit(cache=True)
def block_sums(y, z1, z2, z3, k1, k2, k3):
    n1, n2, n3 = y.shape
    m = k1 * k2 * k3
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    for i in range(n1):
        a = z1[i] * k2
        for j in range(n2):
            b = (a + z2[j]) * k3
            for ell in range(n3):
                idx = b + z3[ell]
                sums[idx] += y[i, j, ell]
                counts[idx] += 1
    return sums, counts


@njit(cache=True)
def partial_sums_mode1(y, z2, z3, k2, k3):
    n1, n2, n3 = y.shape
    m = n1 * k2 * k3
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    for i in range(n1):
        a = i * k2
        for j in range(n2):
            b = (a + z2[j]) * k3
            for ell in range(n3):
                idx = b + z3[ell]
                sums[idx] += y[i, j, ell]
                counts[idx] += 1
    return sums, counts


@njit(cache=True)
def partial_sums_mode2(y, z1, z3, k1, k3):
    n1, n2, n3 = y.shape
    m = k1 * n2 * k3
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    for i in range(n1):
        a = z1[i] * n2
        for j in range(n2):
            b = (a + j) * k3
            for ell in range(n3):
                idx = b + z3[ell]
                sums[idx] += y[i, j, ell]
                counts[idx] += 1
    return sums, counts


@njit(cache=True)
def partial_sums_mode3(y, z1, z2, k1, k2):
    n1, n2, n3 = y.shape
    m = k1 * k2 * n3
    sums = np.zeros(m)
    counts = np.zeros(m, dtype=np.int64)
    for i in range(n1):
        a = z1[i] * k2
        for j in range(n2):
            b = (a + z2[j]) * n3
            for ell in range(n3):
                idx = b + ell
                sums[idx] += y[i, j, ell]
                counts[idx] += 1
    return sums, counts
