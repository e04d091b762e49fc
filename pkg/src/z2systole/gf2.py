"""Dense linear algebra over GF(2).

Matrices are held as ``uint8`` 0/1 arrays and packed into little-endian
``uint64`` words for elimination.
"""
from __future__ import annotations

import numpy as np

from . import kernels


def pack_rows(a: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix (or vector) into rows of ``uint64`` words, bit ``j`` = column ``j``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.uint8))
    rows, cols = a.shape
    nw = max(1, (cols + 63) // 64)
    padded = np.zeros((rows, nw * 64), dtype=np.uint8)
    padded[:, :cols] = a & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(rows, nw)


def unpack_rows(w: np.ndarray, ncols: int) -> np.ndarray:
    w = np.ascontiguousarray(np.atleast_2d(w), dtype=np.uint64)
    bits = np.unpackbits(w.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :ncols].astype(np.uint8)


def pack_vector(v: np.ndarray) -> np.ndarray:
    return pack_rows(v)[0]


def unpack_vector(w: np.ndarray, ncols: int) -> np.ndarray:
    return unpack_rows(w, ncols)[0]


class BinaryMatrix:
    """A matrix over GF(2) with rank, solve and kernel/image bases."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.asarray(data, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("BinaryMatrix needs a 2-d array")
        self.data = arr & 1

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "BinaryMatrix":
        return BinaryMatrix(self.data.T.copy())

    def __matmul__(self, other):
        if isinstance(other, BinaryMatrix):
            return BinaryMatrix(_mul(self.data, other.data))
        return _mul(self.data, np.asarray(other, dtype=np.uint8))

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryMatrix) and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols}, nnz={int(self.data.sum())})"

    def is_zero(self) -> bool:
        return not self.data.any()

    def rref(self) -> tuple[np.ndarray, np.ndarray]:
        """Reduced row echelon form and pivot columns (lowest-index pivoting)."""
        if self.rows == 0 or self.cols == 0:
            return self.data.copy(), np.zeros(0, dtype=np.int64)
        W = pack_rows(self.data)
        pivots = kernels.gf2_rref(W, self.cols)
        return unpack_rows(W, self.cols), np.asarray(pivots, dtype=np.int64)

    def rank(self) -> int:
        return int(self.rref()[1].size)

    def pivot_columns(self) -> np.ndarray:
        """Indices of the lowest-index maximal independent set of columns."""
        return self.rref()[1]

    def solve(self, b) -> np.ndarray | None:
        """Some ``x`` with ``A x = b``, or ``None`` when the system is inconsistent.

        Free variables are set to zero, so the answer is deterministic. The
        returned solution is re-checked before it leaves.
        """
        b = np.asarray(b, dtype=np.uint8) & 1
        if b.shape != (self.rows,):
            raise ValueError(f"right-hand side has shape {b.shape}, expected ({self.rows},)")
        if self.cols == 0:
            return np.zeros(0, dtype=np.uint8) if not b.any() else None
        aug = np.concatenate([self.data, b[:, None]], axis=1)
        R, piv = BinaryMatrix(aug).rref()
        if piv.size and piv[-1] == self.cols:
            return None
        x = np.zeros(self.cols, dtype=np.uint8)
        x[piv] = R[: piv.size, self.cols]
        assert np.array_equal(_mul(self.data, x), b)
        return x

    def nullspace(self) -> np.ndarray:
        """Rows form a basis of ``{x : A x = 0}``."""
        R, piv = self.rref()
        free = np.setdiff1d(np.arange(self.cols), piv)
        basis = np.zeros((free.size, self.cols), dtype=np.uint8)
        for i, f in enumerate(free):
            basis[i, f] = 1
            if piv.size:
                basis[i, piv] = R[: piv.size, f]
        return basis

    def column_basis(self) -> np.ndarray:
        """Independent columns spanning the image, returned as rows."""
        return self.data[:, self.pivot_columns()].T.copy()

    def inverse(self) -> "BinaryMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        aug = np.concatenate([self.data, np.eye(n, dtype=np.uint8)], axis=1)
        R, piv = BinaryMatrix(aug).rref()
        if piv.size < n or piv[n - 1] != n - 1:
            raise np.linalg.LinAlgError("singular matrix over GF(2)")
        return BinaryMatrix(R[:, n:])


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64) % 2).astype(np.uint8)


def rank(a) -> int:
    return BinaryMatrix(a).rank()
