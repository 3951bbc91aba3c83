"""Polar transform, rate profiles and polar-transform encoding.

Index convention: bit ``a`` of an index ``i`` is ``(i >> a) & 1`` with ``i_0``
the least significant bit. Row ``i`` of ``G_N`` has a one in column ``j`` iff
the support of ``j`` is contained in the support of ``i``.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .gf2 import BitMatrix, as_bits, pack_rows

MAX_N_LOG2 = int(os.environ.get("SRPAC_MAX_N_LOG2", "16"))

CONSTRUCTIONS = ("bhattacharyya", "pw", "explicit")

PROFILE_DIR = Path(__file__).with_name("profiles")


class SizeError(ValueError):
    """Block length outside the supported range."""


@dataclass(frozen=True)
class CodeSpec:
    """Rate profile of a length ``2**n`` polar code with dimension ``K``."""

    n: int
    info_set: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_N_LOG2:
            raise SizeError(f"n={self.n} outside [1, {MAX_N_LOG2}]")
        info = tuple(sorted(int(i) for i in self.info_set))
        if len(set(info)) != len(info):
            raise ValueError("information set has duplicate indices")
        if not info:
            raise ValueError("information set is empty")
        if info[0] < 0 or info[-1] >= self.N:
            raise ValueError(f"information index outside [0, {self.N - 1}]")
        object.__setattr__(self, "info_set", info)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def K(self) -> int:
        return len(self.info_set)

    @property
    def rate(self) -> float:
        return self.K / self.N

    @property
    def frozen_set(self) -> tuple[int, ...]:
        info = set(self.info_set)
        return tuple(i for i in range(self.N) if i not in info)

    @property
    def info_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=bool)
        mask[list(self.info_set)] = True
        return mask

    def scatter(self, message) -> np.ndarray:
        """Place ``message`` bits on the information positions, ascending."""
        message = as_bits(message, self.K)
        v = np.zeros(self.N, dtype=np.uint8)
        v[list(self.info_set)] = message
        return v

    def gather(self, v) -> np.ndarray:
        return np.asarray(v, dtype=np.uint8)[..., list(self.info_set)]

    def __str__(self) -> str:
        return f"({self.N},{self.K})"


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_N_LOG2:
        raise SizeError(f"n={n} outside [1, {MAX_N_LOG2}]")


@lru_cache(maxsize=None)
def polar_transform(n: int) -> BitMatrix:
    """Return ``G_N``, the ``n``-fold Kronecker power of ``[[1, 0], [1, 1]]``."""
    _check_n(n)
    N = 1 << n
    if n <= 6:
        i = np.arange(N)[:, None]
        j = np.arange(N)[None, :]
        return BitMatrix.from_dense(((j & ~i) == 0).astype(np.uint8))
    # entry (i, j) factorises over the low 6 bits and the word index
    base = pack_rows(polar_transform(6).to_array())[:, 0]
    i = np.arange(N, dtype=np.int64)[:, None]
    w = np.arange(N // 64, dtype=np.int64)[None, :]
    packed = np.where((w & ~(i >> 6)) == 0, base[i & 63], np.uint64(0))
    return BitMatrix(packed.astype(np.uint64), (N, N))


def row_weight(n: int, i: int) -> int:
    """Hamming weight of row ``i`` of ``G_N``: ``2**popcount(i)``."""
    _check_n(n)
    if not 0 <= i < (1 << n):
        raise IndexError(f"row index {i} outside [0, {(1 << n) - 1}]")
    return 1 << bin(int(i)).count("1")


def row_weights(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    pop = np.zeros_like(idx)
    for a in range(n):
        pop += (idx >> a) & 1
    return (1 << pop).astype(np.int64)


def min_distance(spec: CodeSpec) -> int:
    """Minimum distance of the polar code: smallest information-row weight."""
    return min(row_weight(spec.n, i) for i in spec.info_set)


def bhattacharyya_log(n: int, design_snr_db: float, rate: float = 1.0) -> np.ndarray:
    """Natural log of the Bhattacharyya parameter of each bit channel.

    The underlying BPSK-AWGN channel has ``Z = exp(-rate * Eb/N0)``. Each
    polarisation step maps ``Z`` to ``2Z - Z**2`` (bit 0) or ``Z**2`` (bit 1);
    the first step acts on the least significant index bit. Computed in the
    log domain so high design SNRs do not underflow into ties.
    """
    N = 1 << n
    lz = np.full(N, -rate * 10.0 ** (design_snr_db / 10.0))
    idx = np.arange(N)
    for a in range(n):
        bit = ((idx >> a) & 1).astype(bool)
        worse = lz + np.log(2.0 - np.exp(lz))
        lz = np.where(bit, 2.0 * lz, worse)
    return lz


def polarization_weight(n: int, beta: float = 2.0 ** 0.25) -> np.ndarray:
    idx = np.arange(1 << n)
    return sum(((idx >> a) & 1) * beta ** a for a in range(n))


def parse_info_set(text: str) -> list[int]:
    """Parse decimal indices separated by commas/whitespace; ``#`` starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for tok in re.split(r"[,\s]+", line.strip()):
            if not tok:
                continue
            if not re.fullmatch(r"\d+", tok):
                raise ValueError(f"line {lineno}: bad index {tok!r}")
            out.append(int(tok))
    return out


def load_info_set(path, n: int, K: int | None = None) -> CodeSpec:
    path = Path(path)
    if not path.exists() and (PROFILE_DIR / path.name).exists():
        path = PROFILE_DIR / path.name
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValueError(f"cannot read information set {path}: {exc}") from exc
    idx = parse_info_set(text)
    if len(set(idx)) != len(idx):
        raise ValueError(f"{path}: duplicate indices")
    if K is not None and len(idx) != K:
        raise ValueError(f"{path}: expected {K} indices, found {len(idx)}")
    return CodeSpec(n, tuple(idx))


def build_info_set(n: int, K: int, method: str = "bhattacharyya",
                   design_snr_db: float = 0.0, path=None) -> CodeSpec:
    """Pick the ``K`` most reliable indices.

    ``method`` is ``"bhattacharyya"`` (design SNR as Eb/N0 in dB),
    ``"pw"`` (polarization weight, beta = 2**0.25) or ``"explicit"``
    (read ``path``). Ties are broken towards the larger index.
    """
    _check_n(n)
    N = 1 << n
    if not 1 <= K <= N:
        raise ValueError(f"K={K} outside [1, {N}]")
    if method == "explicit":
        if path is None:
            raise ValueError("explicit construction needs a path")
        return load_info_set(path, n, K)
    idx = np.arange(N)
    if method == "bhattacharyya":
        order = np.lexsort((-idx, bhattacharyya_log(n, design_snr_db, K / N)))
    elif method == "pw":
        order = np.lexsort((-idx, -polarization_weight(n)))
    else:
        raise ValueError(f"unknown construction {method!r}; expected one of {CONSTRUCTIONS}")
    return CodeSpec(n, tuple(sorted(order[:K].tolist())))


def polar_encode(spec: CodeSpec, u) -> np.ndarray:
    """``x = u G_N`` over F2 through the butterfly network."""
    u = as_bits(u, spec.N)
    return polar_butterfly(u)


def polar_butterfly(u: np.ndarray) -> np.ndarray:
    """Apply ``G_N`` along the last axis of a 0/1 array (batch friendly)."""
    x = np.array(u, dtype=np.uint8, copy=True)
    N = x.shape[-1]
    n = int(math.log2(N))
    if 1 << n != N:
        raise SizeError(f"length {N} is not a power of two")
    lead = x.shape[:-1]
    for a in range(n):
        half = 1 << a
        view = x.reshape(*lead, N // (2 * half), 2, half)
        view[..., 0, :] ^= view[..., 1, :]
    return x
