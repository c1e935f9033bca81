"""Dense order-3 tensors and their matrix algebra.

Conventions, fixed once here and relied on everywhere else:

* storage is C order on shape (n1, n2, n3), i.e. the last index runs fastest;
* ``matricize(t, m)`` flattens mode m to rows with 1-based index maps

  - mode 1: column of (i2, i3) is  i2 + n2*(i3-1)
  - mode 2: column of (i3, i1) is  i3 + n3*(i1-1)
  - mode 3: column of (i1, i2) is  i1 + n1*(i2-1)

  (translated to 0-based internally; tests pin the translation on
  exhaustively enumerated small cases);
* with that column order, ``matricize(mode_product-chain)`` factors as
  ``V_m @ matricize(g, m) @ kron(V_{m+2}, V_{m+1}).T`` with mode indices
  wrapping past 3.

All public indices are 0-based except cluster labels, which stay 1-based.
"""

from __future__ import annotations

import numpy as np

_MODES = (1, 2, 3)
# axis orders that realize the column maps above as transpose + reshape
_FORWARD = {1: (0, 2, 1), 2: (1, 0, 2), 3: (2, 1, 0)}
_INVERSE = {1: (0, 2, 1), 2: (1, 0, 2), 3: (2, 1, 0)}


class Tensor3:
    """Immutable dense order-3 tensor of float64 values.

    The backing array is made read-only so instances are safe to share
    across threads; construction rejects non-finite entries.
    """

    __slots__ = ("data",)

    def __init__(self, data, copy: bool = True):
        if copy:
            arr = np.array(data, dtype=np.float64, order="C")
        else:  # adopt the buffer when possible (fresh internal results)
            arr = np.ascontiguousarray(data, dtype=np.float64)
        if arr.ndim != 3:
            raise ValueError(f"expected a 3-way array, got ndim={arr.ndim}")
        if arr.size == 0:
            raise ValueError("all three dimensions must be positive")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Tensor3 is immutable")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape

    def __repr__(self):
        return f"Tensor3(dims={self.data.shape})"


def _check_mode(mode: int) -> None:
    if mode not in _MODES:
        raise ValueError(f"mode must be 1, 2 or 3, got {mode}")


def matricize(t: Tensor3, mode: int) -> np.ndarray:
    """Unfold mode ``mode`` to rows; see the module docstring for the layout."""
    _check_mode(mode)
    x = t.data.transpose(_FORWARD[mode])
    return np.ascontiguousarray(x.reshape(x.shape[0], -1))


def dematricize(m: np.ndarray, mode: int, dims: tuple[int, int, int]) -> Tensor3:
    """Exact inverse of :func:`matricize` for the given target dims."""
    _check_mode(mode)
    m = np.asarray(m, dtype=np.float64)
    n1, n2, n3 = dims
    expected = {1: (n1, n2 * n3), 2: (n2, n1 * n3), 3: (n3, n1 * n2)}[mode]
    if m.shape != expected:
        raise ValueError(f"mode-{mode} matrix for dims {dims} must have "
                         f"shape {expected}, got {m.shape}")
    folded = {1: (n1, n3, n2), 2: (n2, n1, n3), 3: (n3, n2, n1)}[mode]
    return Tensor3(m.reshape(folded).transpose(_INVERSE[mode]))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with block (i, j) equal to a[i, j] * b."""
    return np.kron(np.asarray(a), np.asarray(b))


def mode_product(g: Tensor3, v: np.ndarray, mode: int) -> Tensor3:
    """Contract mode ``mode`` of g with the columns of v.

    Entry (i1, i2, i3) of ``mode_product(g, v, 1)`` is
    ``sum_j g[j, i2, i3] * v[i1, j]``; modes 2 and 3 analogously.
    """
    _check_mode(mode)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] != g.dims[mode - 1]:
        raise ValueError(f"matrix with {v.shape} columns cannot contract "
                         f"mode {mode} of dims {g.dims}")
    if mode == 1:
        out = np.tensordot(v, g.data, axes=(1, 0))
    elif mode == 2:
        out = np.moveaxis(np.tensordot(g.data, v, axes=(1, 1)), 2, 1)
    else:
        out = np.tensordot(g.data, v, axes=(2, 1))
    return Tensor3(out, copy=False)


def frobenius_norm(t: Tensor3) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(t.data.ravel()))
