"""Truncated infinite matrices E and their action on operator sequences."""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .model import TransformMatrix


@dataclass(frozen=True, eq=False)
class TransformedSequence:
    """The mixed operators ``M_n = sum_k E[n,k] Lambda_k``, shape ``(N, p, d)``."""

    operators: np.ndarray
    source_kind: str

    @property
    def N(self):
        return self.operators.shape[0]

    def stacked(self):
        """All ``M_n`` stacked vertically into one ``(N p) x d`` matrix."""
        n, p, d = self.operators.shape
        return self.operators.reshape(n * p, d)


def make_identity(N):
    if N < 1:
        raise ShapeError(f"N must be >= 1, got {N}")
    return TransformMatrix(np.eye(N), "identity")


def make_delta(N):
    """Backward-difference matrix: 1 on the diagonal, -1 on the first subdiagonal."""
    if N < 1:
        raise ShapeError(f"N must be >= 1, got {N}")
    return TransformMatrix(np.eye(N) - np.eye(N, k=-1), "delta")


def make_banded(N, diagonals):
    """Constant-diagonal matrix from ``{offset: value}`` (offset -1 is the first subdiagonal)."""
    if N < 1:
        raise ShapeError(f"N must be >= 1, got {N}")
    e = np.zeros((N, N), dtype=np.complex128)
    for offset, value in diagonals.items():
        offset = int(offset)
        if abs(offset) >= N:
            raise ShapeError(f"band offset {offset} does not fit an {N}x{N} matrix")
        e += complex(value) * np.eye(N, k=offset)
    return TransformMatrix(e, "banded")


def make_dense(entries):
    return TransformMatrix(entries, "dense")


def apply_transform(E, seq):
    """Mix ``seq`` by ``E``: ``M_n = sum_k E[n,k] Lambda_k``.

    The sum runs over ``k`` in ascending order and skips exact zeros, so
    the difference matrix yields ``Lambda_n - Lambda_{n-1}`` bit-exactly.
    """
    if E.size_N != seq.N:
        raise ShapeError(f"transform is {E.size_N}x{E.size_N} but the sequence has {seq.N} terms")
    e = E.entries
    ops = seq.operators
    out = np.zeros_like(ops)
    for k in range(seq.N):
        rows = np.flatnonzero(e[:, k])
        if rows.size:
            out[rows] += e[rows, k][:, None, None] * ops[k]
    return TransformedSequence(out, E.kind_tag)
