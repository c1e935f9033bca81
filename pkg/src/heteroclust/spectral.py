"""Subspace estimation under heteroskedastic noise.

The estimator of interest runs diagonal-imputed PCA over a growing sequence
of well-conditioned eigenvalue blocks and stops as soon as the remaining
spectrum of the working Gram estimate drops below a threshold, so only
directions that actually carry signal are kept.  A plain SVD-of-the-Gram
estimator is provided for baseline comparisons, together with a data-driven
rule for the stopping threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import abs_spectrum, gram, p_offdiag, singular_values, sym_eig_top
from .tensor3 import Tensor3, matricize

_TAU_MODES = ("empirical", "theoretical", "fixed")


@dataclass
class SpectralConfig:
    """Tuning knobs for subspace estimation.

    tau_mode selects how the stopping threshold is computed
    (:func:`select_threshold`); iters_per_round is the imputation iteration
    count per deflation round; max_rounds defaults to the requested rank.
    """

    tau_mode: str = "empirical"
    tau_const: float = 1.1
    tau_fixed: float = 0.0
    iters_per_round: int = 10
    max_rounds: int | None = None

    def __post_init__(self):
        if self.tau_mode not in _TAU_MODES:
            raise ValueError(f"tau_mode must be one of {_TAU_MODES}")
        if self.tau_const <= 0:
            raise ValueError("tau_const must be positive")
        if self.iters_per_round < 1:
            raise ValueError("iters_per_round must be >= 1")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1 when given")


@dataclass
class DeflationTrace:
    """Audit record of one deflation run: the rank chosen each round, the
    spectrum value seen at each loop test, iteration counts, and whether the
    loop exited without running (degenerate input)."""

    ranks: list[int] = field(default_factory=list)
    thresholds_seen: list[float] = field(default_factory=list)
    iters: list[int] = field(default_factory=list)
    degenerate: bool = False


@dataclass
class SubspaceEstimate:
    """Orthonormal basis with the rank the deflation actually selected."""

    basis: np.ndarray
    r_sel: int
    trace: DeflationTrace


def hetero_pca(g_in: np.ndarray, r: int, t_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Iterative diagonal imputation of a symmetric Gram estimate.

    Runs t_max + 1 passes; each pass takes the rank-r leading eigenspace of
    the current matrix and rewrites only the diagonal with that of the
    low-rank reconstruction.  Returns the final matrix together with the
    basis computed in the last pass.  Off-diagonal entries are never
    touched, so they match g_in bit for bit.
    """
    g_in = np.asarray(g_in, dtype=np.float64)
    n = g_in.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"rank r={r} out of range for {n}x{n} matrix")
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    g = g_in.copy()
    u = None
    for _ in range(t_max + 1):
        eig = sym_eig_top(g, r)
        u = eig.eigenvectors
        np.fill_diagonal(g, np.einsum("ij,j,ij->i", u, eig.eigenvalues, u))
    return g, u


def _rank_selection(sigma: np.ndarray, r: int, r_prev: int) -> int:
    """Largest rank whose eigenvalue block is well conditioned (head within
    a factor 4 of the block start) and separated by a relative gap of 1/r;
    falls back to r when no candidate qualifies.

    ``sigma`` is the descending |eigenvalue| array; values past its end are
    treated as zero.  Comparisons are cross-multiplied so zero spectra never
    divide by zero.
    """
    padded = np.concatenate([sigma, np.zeros(r + 2)])
    head = padded[r_prev]
    best = 0
    for cand in range(r_prev + 1, r + 1):
        if head <= 4.0 * padded[cand - 1] and \
                padded[cand - 1] - padded[cand] >= padded[cand - 1] / r:
            best = cand
    return best if best > 0 else r


def rank_selection(g: np.ndarray, r: int, r_prev: int) -> int:
    """Rank choice for the next deflation round, from the spectrum of g."""
    g = np.asarray(g, dtype=np.float64)
    if not 0 <= r_prev < r <= g.shape[0]:
        raise ValueError(f"need 0 <= r_prev < r <= {g.shape[0]}, "
                         f"got r_prev={r_prev}, r={r}")
    return _rank_selection(abs_spectrum(g), r, r_prev)


def thresholded_deflated_hetero_pca(y: np.ndarray, r: int, tau: float,
                                    cfg: SpectralConfig | None = None) -> SubspaceEstimate:
    """Deflation loop over diagonal-imputed PCA with a spectral stop rule.

    Starting from the diagonal-deleted Gram matrix of y, repeatedly select
    the next well-conditioned rank block and refine with :func:`hetero_pca`
    until either the full rank r is reached or the (r_j+1)-th spectrum value
    falls to tau or below.  If even the leading value is at or below tau the
    loop never runs; the rank-1 leading eigenvector is returned and the
    trace is flagged degenerate so downstream consumers still get a
    projection to work with.
    """
    if cfg is None:
        cfg = SpectralConfig()
    y = np.asarray(y, dtype=np.float64)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if not 1 <= r <= y.shape[0]:
        raise ValueError(f"rank r={r} out of range for {y.shape[0]} rows")
    g = p_offdiag(gram(y))
    sigma = abs_spectrum(g)
    max_rounds = cfg.max_rounds if cfg.max_rounds is not None else r
    trace = DeflationTrace()
    r_j = 0
    u = None
    while r_j < r and len(trace.ranks) < max_rounds:
        s = float(sigma[r_j])
        trace.thresholds_seen.append(s)
        if not s > tau:
            break
        r_new = _rank_selection(sigma, r, r_j)
        g, u = hetero_pca(g, r_new, cfg.iters_per_round)
        sigma = abs_spectrum(g)
        r_j = r_new
        trace.ranks.append(r_j)
        trace.iters.append(cfg.iters_per_round)
    if u is None:
        trace.degenerate = True
        u = sym_eig_top(g, 1).eigenvectors
        r_j = 1
    return SubspaceEstimate(basis=u, r_sel=r_j, trace=trace)


def vanilla_svd_subspace(y: np.ndarray, r: int) -> SubspaceEstimate:
    """Baseline estimator: top-r eigenspace of the plain Gram matrix."""
    y = np.asarray(y, dtype=np.float64)
    if not 1 <= r <= y.shape[0]:
        raise ValueError(f"rank r={r} out of range for {y.shape[0]} rows")
    basis = sym_eig_top(gram(y), r).eigenvectors
    return SubspaceEstimate(basis=basis, r_sel=r, trace=DeflationTrace())


def estimate_noise_scale(y_tensor: Tensor3, k: tuple[int, int, int]) -> float:
    """Noise-level estimate from the residual spectrum of the unfolding
    along the smallest mode (lowest mode index on ties): the (k+1)-th
    singular value normalized by the root of the unfolding's column count.
    """
    dims = y_tensor.dims
    mode = int(np.argmin(dims))  # 0-based; argmin takes the first minimum
    if k[mode] + 1 > dims[mode]:
        raise ValueError(f"need k+1 <= n along mode {mode + 1}: "
                         f"k={k[mode]}, n={dims[mode]}")
    m = matricize(y_tensor, mode + 1)
    # the smallest-mode unfolding always has rows <= cols
    sv = singular_values(m)
    return float(sv[k[mode]] / np.sqrt(m.shape[1]))


def select_threshold(y_tensor: Tensor3, k: tuple[int, int, int],
                     cfg: SpectralConfig | None = None) -> float:
    """Stopping threshold for the deflation loop.

    empirical:    tau_const * sqrt(n1 n2 n3) * w^2
    theoretical:  the same with an extra log^2(max n_i) factor (natural log)
    fixed:        cfg.tau_fixed verbatim

    where w is :func:`estimate_noise_scale`.
    """
    if cfg is None:
        cfg = SpectralConfig()
    if cfg.tau_mode == "fixed":
        return float(cfg.tau_fixed)
    n1, n2, n3 = y_tensor.dims
    w = estimate_noise_scale(y_tensor, k)
    tau = cfg.tau_const * np.sqrt(float(n1) * n2 * n3) * w * w
    if cfg.tau_mode == "theoretical":
        tau *= np.log(float(max(n1, n2, n3))) ** 2
    return float(tau)
