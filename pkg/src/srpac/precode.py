"""Convolutional pre-transformation: forward (PAC), reverse (R-PAC) and
selective reverse (SR-PAC), plus the resulting effective generators."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gf2 import BitMatrix, as_bits
from .polar import CodeSpec, min_distance, polar_butterfly, polar_transform, row_weights


class Mode(str, enum.Enum):
    NONE = "none"
    FORWARD = "forward"
    REVERSE = "reverse"
    SELECTIVE_REVERSE = "selective_reverse"


_MODE_ALIASES = {
    "polar": Mode.NONE, "pac": Mode.FORWARD, "rpac": Mode.REVERSE, "r-pac": Mode.REVERSE,
    "srpac": Mode.SELECTIVE_REVERSE, "sr-pac": Mode.SELECTIVE_REVERSE, "selective": Mode.SELECTIVE_REVERSE,
}


def parse_mode(text) -> Mode:
    if isinstance(text, Mode):
        return text
    key = str(text).strip().lower()
    if key in _MODE_ALIASES:
        return _MODE_ALIASES[key]
    return Mode(key)


def parse_poly(text) -> tuple[int, ...]:
    """``"1101"`` -> ``(1, 1, 0, 1)``; string order is ``p_0 .. p_m``."""
    if isinstance(text, str):
        s = text.strip().replace(" ", "").replace(",", "")
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"polynomial must be a 0/1 string, got {text!r}")
        return tuple(int(c) for c in s)
    return tuple(int(b) for b in as_bits(text))


@dataclass(frozen=True)
class PrecodeSpec:
    poly: tuple[int, ...] = (1,)
    mode: Mode = Mode.NONE

    def __post_init__(self):
        poly = parse_poly(self.poly)
        if poly[0] != 1 or poly[-1] != 1:
            raise ValueError(f"polynomial must have p_0 = p_m = 1, got {poly}")
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "mode", parse_mode(self.mode))

    @property
    def m(self) -> int:
        return len(self.poly) - 1

    @property
    def label(self) -> str:
        names = {Mode.NONE: "Polar", Mode.FORWARD: "PAC", Mode.REVERSE: "R-PAC",
                 Mode.SELECTIVE_REVERSE: "SR-PAC"}
        if self.mode is Mode.NONE:
            return "Polar"
        return f"{names[self.mode]}({self.m + 1})"

    def poly_string(self) -> str:
        return "".join(map(str, self.poly))


def _check_len(spec: PrecodeSpec, N: int) -> None:
    if spec.m + 1 > N:
        raise ValueError(f"constraint length {spec.m + 1} exceeds N={N}")


def build_P_forward(spec: PrecodeSpec, N: int) -> BitMatrix:
    """Upper-triangular Toeplitz ``P``: row ``r`` holds ``p`` at columns ``r..r+m``."""
    _check_len(spec, N)
    P = np.zeros((N, N), dtype=np.uint8)
    for j, pj in enumerate(spec.poly):
        if pj:
            P[np.arange(N - j), np.arange(j, N)] = 1
    return BitMatrix.from_dense(P)


def build_P_reverse(spec: PrecodeSpec, N: int) -> BitMatrix:
    """``P_r = P^T``; column ``i`` realises ``u_i = sum_j p_j v_{i+j}``."""
    return build_P_forward(spec, N).T


def selective_columns(code: CodeSpec) -> np.ndarray:
    """Columns kept convolutional under SR-PAC: row weight >= minimum distance."""
    return row_weights(code.n) >= min_distance(code)


def build_P_selective(spec: PrecodeSpec, code: CodeSpec) -> BitMatrix:
    Pr = build_P_reverse(spec, code.N).to_array().copy()
    for i in np.flatnonzero(~selective_columns(code)):
        Pr[:, i] = 0
        Pr[i, i] = 1
    return BitMatrix.from_dense(Pr)


def precoding_matrix(spec: PrecodeSpec, code: CodeSpec) -> BitMatrix:
    if spec.mode is Mode.NONE:
        return BitMatrix.identity(code.N)
    if spec.mode is Mode.FORWARD:
        return build_P_forward(spec, code.N)
    if spec.mode is Mode.REVERSE:
        return build_P_reverse(spec, code.N)
    return build_P_selective(spec, code)


def _check_frozen(code: CodeSpec, v: np.ndarray) -> None:
    if code.K == code.N:
        return
    bad = np.flatnonzero(v[..., ~code.info_mask].reshape(-1, code.N - code.K).any(axis=0))
    if bad.size:
        frozen = np.asarray(code.frozen_set)
        raise ValueError(f"nonzero frozen position(s) in v: {frozen[bad].tolist()}")


def convolve(spec: PrecodeSpec, code: CodeSpec, v: np.ndarray) -> np.ndarray:
    """``u`` from ``v`` by direct convolution, along the last axis.

    Index overruns contribute zero in both directions.
    """
    v = np.asarray(v, dtype=np.uint8)
    N = code.N
    u = np.zeros_like(v)
    if spec.mode is Mode.NONE:
        return v.copy()
    for j, pj in enumerate(spec.poly):
        if not pj or j >= N:
            continue
        if spec.mode is Mode.FORWARD:
            u[..., j:] ^= v[..., :N - j]
        else:
            u[..., :N - j] ^= v[..., j:]
    if spec.mode is Mode.SELECTIVE_REVERSE:
        keep = selective_columns(code)
        u[..., ~keep] = v[..., ~keep]
    return u


def precode(spec: PrecodeSpec, code: CodeSpec, v) -> np.ndarray:
    """Map the rate-profiled vector ``v`` to the polar input ``u``."""
    v = as_bits(v, code.N)
    _check_frozen(code, v)
    _check_len(spec, code.N)
    return convolve(spec, code, v)


@dataclass(eq=False)
class EffectiveGenerator:
    """``M G_N`` for a precoding matrix ``M``; ``triangular`` is False only for PAC."""

    matrix: BitMatrix
    triangular: bool
    precoder: BitMatrix
    code: CodeSpec
    spec: PrecodeSpec = field(default_factory=PrecodeSpec)

    @cached_property
    def info_rows(self) -> np.ndarray:
        """Rows of the generator on the information set, a ``K x N`` 0/1 array."""
        return self.matrix.to_array()[list(self.code.info_set)].copy()

    @cached_property
    def lower_rows(self) -> np.ndarray:
        """Packed rows with the diagonal bit cleared (strictly-lower part)."""
        rows = self.matrix.packed.copy()
        r = np.arange(rows.shape[0])
        rows[r, r // 64] &= ~(np.uint64(1) << (r % 64).astype(np.uint64))
        return rows

    def encode_v(self, V) -> np.ndarray:
        """Codeword(s) for rate-profiled input(s) ``V`` (1-D or 2-D)."""
        V = np.asarray(V, dtype=np.uint8)
        if V.ndim == 1:
            return self.matrix.vecmul(V)
        return self.matrix.batch_vecmul(V)

    def encode_messages(self, messages) -> np.ndarray:
        M = np.atleast_2d(np.asarray(messages, dtype=np.int64))
        return ((M @ self.info_rows.astype(np.int64)) & 1).astype(np.uint8)


def effective_generator(spec: PrecodeSpec, code: CodeSpec) -> EffectiveGenerator:
    M = precoding_matrix(spec, code)
    return EffectiveGenerator(matrix=M @ polar_transform(code.n),
                              triangular=spec.mode is not Mode.FORWARD,
                              precoder=M, code=code, spec=spec)


def encode(spec: PrecodeSpec, code: CodeSpec, message) -> np.ndarray:
    """Scatter ``message`` onto the information set, precode, then apply ``G_N``."""
    v = code.scatter(message)
    return polar_butterfly(precode(spec, code, v))
