"""Kernel backend selection.

The clustering and refinement inner loops exist twice: jitted (numba) and
pure numpy.  The active backend is chosen once at import from the
``HETEROCLUST_BACKEND`` environment variable:

* ``auto`` (default): numba when importable, numpy otherwise;
* ``numba``: require numba, fail loudly if missing;
* ``numpy``: force the pure-numpy path.

Both backends return bit-identical results; the flag exists for debugging,
benchmarking (see ``benchmarks/bench_backends.py``) and platforms where
numba is unavailable.  :func:`set_backend` switches at runtime for tests.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

_active_name = ""
_active_module = _kernels_numpy


def _load(name: str):
    global _active_name, _active_module
    if name == "numpy":
        _active_name, _active_module = "numpy", _kernels_numpy
        return
    if name == "numba":
        from . import _kernels_numba
        _active_name, _active_module = "numba", _kernels_numba
        return
    if name == "auto":
        try:
            from . import _kernels_numba
        except ImportError:
            _active_name, _active_module = "numpy", _kernels_numpy
        else:
            _active_name, _active_module = "numba", _kernels_numba
        return
    raise ValueError(f"unknown backend {name!r}; expected auto, numba or numpy")


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime ('auto', 'numba' or 'numpy')."""
    _load(name)


def active_backend() -> str:
    """Name of the backend currently in use."""
    return _active_name


def kernels():
    """The active kernel module."""
    return _active_module


_load(os.environ.get("HETEROCLUST_BACKEND", "auto").strip().lower() or "auto")
