"""Text file formats for tensors and cluster assignments.

Tensor format: header ``tensor3 <n1> <n2> <n3>``, then n1*n2*n3 decimal
values in storage order (first index outermost, third innermost), each
printed with 17 significant digits so read(write(t)) is bit-exact.

Assignment format: header ``labels <n> <k>``, then n integers in 1..k.
Several assignment blocks may be concatenated in one file (the pipelines
produce one block per mode).
"""

from __future__ import annotations

import numpy as np

from .clustering import ClusterAssignment
from .tensor3 import Tensor3

_VALUES_PER_LINE = 8


def write_tensor(path, t: Tensor3) -> None:
    n1, n2, n3 = t.dims
    flat = t.data.ravel()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"tensor3 {n1} {n2} {n3}\n")
        for start in range(0, flat.size, _VALUES_PER_LINE):
            chunk = flat[start:start + _VALUES_PER_LINE]
            fh.write(" ".join(format(v, ".17g") for v in chunk))
            fh.write("\n")


def read_tensor(path) -> Tensor3:
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 4 or tokens[0] != "tensor3":
        raise ValueError(f"{path}: expected 'tensor3 <n1> <n2> <n3>' header")
    try:
        dims = tuple(int(v) for v in tokens[1:4])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed tensor dimensions") from exc
    count = dims[0] * dims[1] * dims[2]
    body = tokens[4:]
    if len(body) != count:
        raise ValueError(f"{path}: expected {count} values, found {len(body)}")
    data = np.array([float(v) for v in body]).reshape(dims)
    return Tensor3(data)


def write_assignments(path, assignments) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for a in assignments:
            fh.write(f"labels {a.n} {a.k}\n")
            labels = a.labels
            for start in range(0, labels.size, 20):
                fh.write(" ".join(str(int(v)) for v in labels[start:start + 20]))
                fh.write("\n")


def read_assignments(path) -> list[ClusterAssignment]:
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split()
    out = []
    pos = 0
    while pos < len(tokens):
        if tokens[pos] != "labels" or pos + 3 > len(tokens):
            raise ValueError(f"{path}: expected 'labels <n> <k>' block header")
        try:
            n, k = int(tokens[pos + 1]), int(tokens[pos + 2])
        except ValueError as exc:
            raise ValueError(f"{path}: malformed labels header") from exc
        pos += 3
        if pos + n > len(tokens):
            raise ValueError(f"{path}: labels block truncated (expected {n} values)")
        try:
            labels = np.array([int(v) for v in tokens[pos:pos + n]], dtype=np.int64)
        except ValueError as exc:
            raise ValueError(f"{path}: non-integer label") from exc
        pos += n
        out.append(ClusterAssignment(labels, k))
    if not out:
        raise ValueError(f"{path}: no labels blocks found")
    return out
