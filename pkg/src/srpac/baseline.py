"""Successive-cancellation (SC) and SC-list decoders for plain polar codes.

Both walk the same recursion: for ``x = u G_N`` the first half of the
codeword is ``a ^ b`` and the second half is ``b``, where ``a``/``b`` are
the half-length codewords of the two halves of ``u``.
"""

from __future__ import annotations

import numpy as np

from .polar import CodeSpec


def f_exact(a, b):
    """Check-node update ``2 atanh(tanh(a/2) tanh(b/2))`` in a stable form."""
    return (np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
            + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b))))


def f_minsum(a, b):
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_update(a, b, bits):
    return b + (1.0 - 2.0 * bits) * a


def _check(code: CodeSpec, llr) -> np.ndarray:
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (code.N,):
        raise ValueError(f"expected {code.N} LLRs, got shape {llr.shape}")
    return llr


def _sc(llr, frozen, f):
    n = llr.shape[0]
    if n == 1:
        bit = 0 if frozen[0] or llr[0] >= 0 else 1
        u = np.array([bit], dtype=np.uint8)
        return u, u.copy()
    h = n // 2
    uL, xL = _sc(f(llr[:h], llr[h:]), frozen[:h], f)
    uR, xR = _sc(g_update(llr[:h], llr[h:], xL), frozen[h:], f)
    return np.concatenate([uL, uR]), np.concatenate([xL ^ xR, xR])


def sc_decode(code: CodeSpec, llr, minsum: bool = False) -> np.ndarray:
    """Hard-decision SC; frozen bits are decided 0. Returns the K message bits."""
    llr = _check(code, llr)
    u, _ = _sc(llr, ~code.info_mask, f_minsum if minsum else f_exact)
    return u[list(code.info_set)]


def _penalty(lam, bit, exact):
    signed = (1.0 - 2.0 * bit) * lam
    if exact:
        return np.logaddexp(0.0, -signed)
    return np.where(signed < 0, np.abs(lam), 0.0)


def _scl(llr, frozen, pm, L, f, exact):
    P, n = llr.shape
    if n == 1:
        lam = llr[:, 0]
        if frozen[0]:
            u = np.zeros((P, 1), dtype=np.uint8)
            return u, u.copy(), pm + _penalty(lam, 0, exact), np.arange(P)
        cand = np.concatenate([pm + _penalty(lam, 0, exact), pm + _penalty(lam, 1, exact)])
        keep = np.argsort(cand, kind="stable")[:L]
        u = (keep >= P).astype(np.uint8)[:, None]
        return u, u.copy(), cand[keep], keep % P
    h = n // 2
    uL, xL, pm, o1 = _scl(f(llr[:, :h], llr[:, h:]), frozen[:h], pm, L, f, exact)
    right = g_update(llr[o1, :h], llr[o1, h:], xL)
    uR, xR, pm, o2 = _scl(right, frozen[h:], pm, L, f, exact)
    u = np.concatenate([uL[o2], uR], axis=1)
    x = np.concatenate([xL[o2] ^ xR, xR], axis=1)
    return u, x, pm, o1[o2]


def scl_paths(code: CodeSpec, llr, L: int, minsum: bool = False):
    """All surviving paths: ``(u, x, path_metric)`` sorted by metric."""
    llr = _check(code, llr)
    if L < 1 or L & (L - 1):
        raise ValueError(f"list size must be a power of two, got {L}")
    f = f_minsum if minsum else f_exact
    u, x, pm, _ = _scl(llr[None, :], ~code.info_mask, np.zeros(1), L, f, not minsum)
    order = np.argsort(pm, kind="stable")
    return u[order], x[order], pm[order]


def scl_decode(code: CodeSpec, llr, L: int, minsum: bool = False) -> np.ndarray:
    """Message of the best path after list decoding (no CRC)."""
    u, _, _ = scl_paths(code, llr, L, minsum=minsum)
    return u[0, list(code.info_set)]
