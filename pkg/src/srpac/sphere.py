"""Maximum-likelihood sphere decoding and list sphere decoding over a unit
lower-triangular effective generator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .polar import CodeSpec
from .precode import EffectiveGenerator


class DecoderError(RuntimeError):
    """The decoder cannot handle the given generator or input."""


@dataclass(frozen=True)
class DecodeOutcome:
    v_hat: np.ndarray
    message_hat: np.ndarray
    sed: float
    nodes_visited: int
    leaves_found: int


def branch_metric(y_i: float, x_i: int) -> float:
    """Squared distance between ``y_i`` and the BPSK image of bit ``x_i``."""
    d = y_i - (1.0 - 2.0 * x_i)
    return d * d


def lower_bounds(y) -> np.ndarray:
    """Per-position bound ``min((y_i - 1)**2, (y_i + 1)**2)``."""
    y = np.asarray(y, dtype=np.float64)
    return np.minimum((y - 1.0) ** 2, (y + 1.0) ** 2)


def lower_bound_prefix(y, use_bound: bool = True) -> np.ndarray:
    """``out[l] = sum(lower_bounds(y)[:l])``, length ``N + 1``."""
    return _kernels.lambda_prefix(np.ascontiguousarray(y, dtype=np.float64), use_bound)


def sed(y, codeword) -> float:
    y = np.asarray(y, dtype=np.float64)
    return float(np.sum((y - (1.0 - 2.0 * np.asarray(codeword, dtype=np.float64))) ** 2))


def _prepare(gen: EffectiveGenerator, code: CodeSpec, y):
    if not gen.triangular or not gen.matrix.is_lower_unitriangular():
        raise DecoderError("sphere decoding needs a unit lower-triangular generator "
                           f"(mode {gen.spec.mode.value} does not give one)")
    if gen.code != code:
        raise DecoderError("generator was built for a different rate profile")
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.shape != (code.N,):
        raise DecoderError(f"expected {code.N} channel values, got shape {y.shape}")
    return y, gen.lower_rows, code.info_mask


def list_sphere_decode(gen: EffectiveGenerator, code: CodeSpec, y, L: int,
                       use_bound: bool = True, radius_sq: float = np.inf) -> list[DecodeOutcome]:
    """The ``L`` smallest-SED inputs (fewer if the code is smaller), ascending.

    A finite ``radius_sq`` restricts the search to leaves with SED at most
    ``radius_sq``; the result is then the leading part of the unrestricted
    list (all of it whenever ``L`` leaves fit inside the sphere).
    """
    if L < 1:
        raise ValueError("list size must be >= 1")
    y, rows, info = _prepare(gen, code, y)
    lp = _kernels.lambda_prefix(y, use_bound)
    out_v, out_m, held, nodes, leaves = _kernels.tree_search(y, lp, rows, info, int(L),
                                                             float(radius_sq))
    order = np.argsort(out_m[:held], kind="stable")
    info_idx = list(code.info_set)
    return [DecodeOutcome(v_hat=out_v[s].copy(), message_hat=out_v[s, info_idx].copy(),
                          sed=float(out_m[s]), nodes_visited=int(nodes), leaves_found=int(leaves))
            for s in order]


def sphere_decode(gen: EffectiveGenerator, code: CodeSpec, y,
                  use_bound: bool = True) -> DecodeOutcome:
    """Depth-first ML search with radius shrinking; the radius starts at +inf."""
    return list_sphere_decode(gen, code, y, 1, use_bound=use_bound)[0]


def sphere_decode_batch(gen: EffectiveGenerator, code: CodeSpec, Y,
                        use_bound: bool = True):
    """Decode each row of ``Y``; returns ``(v_hat, sed, nodes_visited)`` arrays."""
    Y = np.ascontiguousarray(np.atleast_2d(Y), dtype=np.float64)
    _prepare(gen, code, Y[0])
    return _kernels.sd_batch(Y, gen.lower_rows, code.info_mask, use_bound)
