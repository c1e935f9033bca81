"""Symmetric eigendecomposition, Gram matrices and diagonal projections.

Spectral code in this package never looks at signed eigenvalue order: the
deflation iterates are indefinite once their diagonals have been imputed, so
"singular value of a symmetric matrix" always means absolute eigenvalue.
:func:`sym_eig_top` therefore sorts by descending magnitude and pins a sign
convention so repeated runs are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SYM_TOL = 1e-8


@dataclass(frozen=True)
class SymEig:
    """Eigenpairs sorted by descending |eigenvalue|; column j of
    ``eigenvectors`` pairs with ``eigenvalues[j]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def gram(y: np.ndarray) -> np.ndarray:
    """Y @ Y.T, symmetrized by averaging to kill rounding asymmetry."""
    y = np.asarray(y, dtype=np.float64)
    g = y @ y.T
    return (g + g.T) / 2.0


def p_diag(m: np.ndarray) -> np.ndarray:
    """Keep the diagonal, zero everything else."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    out = np.zeros_like(m, dtype=np.float64)
    np.fill_diagonal(out, np.diagonal(m))
    return out


def p_offdiag(m: np.ndarray) -> np.ndarray:
    """Zero the diagonal, keep everything else; p_diag + p_offdiag = id."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"square matrix required, got shape {m.shape}")
    out = np.array(m, dtype=np.float64)
    np.fill_diagonal(out, 0.0)
    return out


def _check_symmetric(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"square matrix required, got shape {g.shape}")
    scale = max(1.0, float(np.abs(g).max()))
    asym = float(np.abs(g - g.T).max())
    if asym > _SYM_TOL * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    return g


def sym_eig_top(g: np.ndarray, r: int) -> SymEig:
    """Top-r eigenpairs of a symmetric matrix by |eigenvalue|.

    Sign convention: in each eigenvector the entry of largest magnitude
    (lowest index on ties) is made positive.  Identical input bits produce
    identical output bits.
    """
    g = _check_symmetric(g)
    n = g.shape[0]
    if not 1 <= r <= n:
        raise ValueError(f"rank r={r} out of range for {n}x{n} matrix")
    try:
        vals, vecs = np.linalg.eigh((g + g.T) / 2.0)
    except np.linalg.LinAlgError as exc:  # should never happen for symmetric input
        raise RuntimeError("eigendecomposition failed to converge") from exc
    order = np.argsort(-np.abs(vals), kind="stable")[:r]
    vals = vals[order]
    vecs = vecs[:, order].copy()
    for j in range(r):
        lead = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[lead, j] < 0.0:
            vecs[:, j] = -vecs[:, j]
    return SymEig(eigenvalues=vals, eigenvectors=vecs)


def abs_spectrum(g: np.ndarray) -> np.ndarray:
    """All |eigenvalues| of a symmetric matrix, descending."""
    g = _check_symmetric(g)
    vals = np.linalg.eigvalsh((g + g.T) / 2.0)
    return np.sort(np.abs(vals))[::-1]


def singular_values(y: np.ndarray) -> np.ndarray:
    """Singular values of y (rows <= cols) as sqrt of Gram eigenvalues."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 2:
        raise ValueError("2-d array required")
    if y.shape[0] > y.shape[1]:
        raise ValueError("rows must not exceed cols; transpose the input")
    vals = np.linalg.eigvalsh(gram(y))[::-1]
    return np.sqrt(np.maximum(vals, 0.0))


def project(u: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Orthogonal projection U (U^T a) onto the column span of u."""
    u = np.asarray(u, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if u.shape[0] != a.shape[0]:
        raise ValueError(f"row mismatch: u has {u.shape[0]}, a has {a.shape[0]}")
    return u @ (u.T @ a)
