"""Dense and bit-packed matrices over F2."""

from __future__ import annotations

import numpy as np

WORD = 64


def as_bits(v, length: int | None = None) -> np.ndarray:
    """Coerce a sequence of 0/1 values into a ``uint8`` vector."""
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError("bit vector must be one-dimensional")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit vector entries must be 0 or 1")
    arr = arr.astype(np.uint8)
    if length is not None and arr.size != length:
        raise ValueError(f"expected {length} bits, got {arr.size}")
    return arr


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix into ``uint64`` words, column ``j`` at bit ``j % 64``."""
    dense = np.ascontiguousarray(dense, dtype=np.uint8)
    rows, cols = dense.shape
    nwords = max(1, -(-cols // WORD))
    padded = np.zeros((rows, nwords * WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view("<u8").reshape(rows, nwords).astype(np.uint64)


def unpack_rows(packed: np.ndarray, cols: int) -> np.ndarray:
    packed = np.ascontiguousarray(packed, dtype="<u8")
    raw = packed.view(np.uint8).reshape(packed.shape[0], -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :cols]


class BitMatrix:
    """Matrix over F2 held as bit-packed rows.

    Rows are ``uint64`` word arrays so that adding a row to an accumulator is
    a handful of XORs. The dense 0/1 view is materialised lazily.
    """

    __slots__ = ("_packed", "shape", "_dense")

    def __init__(self, packed: np.ndarray, shape: tuple[int, int]):
        self._packed = np.ascontiguousarray(packed, dtype=np.uint64)
        self._packed.setflags(write=False)
        self.shape = (int(shape[0]), int(shape[1]))
        self._dense = None

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2:
            raise ValueError("expected a 2-D array")
        if dense.size and not np.all((dense == 0) | (dense == 1)):
            raise ValueError("entries must be 0 or 1")
        return cls(pack_rows(dense.astype(np.uint8)), dense.shape)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def to_array(self) -> np.ndarray:
        if self._dense is None:
            dense = unpack_rows(self._packed, self.shape[1])
            dense.setflags(write=False)
            self._dense = dense
        return self._dense

    def row(self, i: int) -> np.ndarray:
        return self.to_array()[i].copy()

    def row_weights(self) -> np.ndarray:
        return self.to_array().sum(axis=1, dtype=np.int64)

    @property
    def T(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_array().T)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a = self.to_array()
        # row r of the product = XOR of rows of `other` selected by row r of self
        opacked = other.packed
        acc = np.zeros((self.shape[0], opacked.shape[1]), dtype=np.uint64)
        for k in range(self.shape[1]):
            sel = a[:, k].astype(bool)
            if sel.any():
                acc[sel] ^= opacked[k]
        return BitMatrix(acc, (self.shape[0], other.shape[1]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._packed, other._packed)

    def __hash__(self):
        return hash((self.shape, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"BitMatrix(shape={self.shape})"

    def vecmul(self, v) -> np.ndarray:
        """Return ``v @ self`` over F2 for a 0/1 row vector ``v``."""
        v = as_bits(v, self.shape[0])
        idx = np.flatnonzero(v)
        acc = np.bitwise_xor.reduce(self._packed[idx], axis=0) if idx.size else \
            np.zeros(self._packed.shape[1], dtype=np.uint64)
        return unpack_rows(acc[None, :], self.shape[1])[0]

    def batch_vecmul(self, V: np.ndarray) -> np.ndarray:
        """Row-wise ``V @ self`` over F2 for a 2-D 0/1 array ``V``."""
        V = np.asarray(V, dtype=np.int64)
        return ((V @ self.to_array().astype(np.int64)) & 1).astype(np.uint8)

    def is_lower_unitriangular(self) -> bool:
        a = self.to_array()
        if a.shape[0] != a.shape[1]:
            return False
        return bool(np.all(np.diag(a) == 1) and not np.triu(a, 1).any())


def inverse_lower_unitriangular(m: BitMatrix) -> BitMatrix:
    """Invert a unit lower-triangular F2 matrix by forward substitution."""
    if not m.is_lower_unitriangular():
        raise ValueError("matrix is not unit lower triangular")
    a = m.to_array().astype(np.int64)
    n = a.shape[0]
    inv = np.zeros((n, n), dtype=np.int64)
    for r in range(n):
        row = np.zeros(n, dtype=np.int64)
        row[r] = 1
        if r:
            row = (row - a[r, :r] @ inv[:r]) & 1
        inv[r] = row
    return BitMatrix.from_dense(inv.astype(np.uint8))
