"""Slow, independent reference implementations used only by the tests.

Each one is written from the definitions with dense integer arithmetic and
plain loops, sharing no code with the package beyond data containers.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def kron_polar(n: int) -> np.ndarray:
    g = np.array([[1]], dtype=np.int64)
    for _ in range(n):
        g = np.kron(np.array([[1, 0], [1, 1]]), g)
    return g


def forward_matrix(poly, N: int) -> np.ndarray:
    P = np.zeros((N, N), dtype=np.int64)
    for r in range(N):
        for j, pj in enumerate(poly):
            if r + j < N:
                P[r, r + j] = pj
    return P


def reverse_by_formula(poly, v) -> np.ndarray:
    """u_i = sum_j p_j v_{i+j}, indices past N-1 contribute 0."""
    N = len(v)
    return np.array([sum(poly[j] * v[i + j] for j in range(len(poly)) if i + j < N) % 2
                     for i in range(N)], dtype=np.int64)


def forward_by_formula(poly, v) -> np.ndarray:
    N = len(v)
    return np.array([sum(poly[j] * v[i - j] for j in range(len(poly)) if i - j >= 0) % 2
                     for i in range(N)], dtype=np.int64)


def selective_by_formula(poly, v, info_set, n) -> np.ndarray:
    N = len(v)
    dmin = min(2 ** bin(i).count("1") for i in info_set)
    rev = reverse_by_formula(poly, v)
    return np.array([rev[i] if 2 ** bin(i).count("1") >= dmin else v[i] for i in range(N)],
                    dtype=np.int64)


def precode_by_formula(mode: str, poly, v, info_set, n) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    if mode == "none":
        return v.copy()
    if mode == "forward":
        return forward_by_formula(poly, v)
    if mode == "reverse":
        return reverse_by_formula(poly, v)
    return selective_by_formula(poly, v, info_set, n)


def codebook(mode: str, poly, info_set, n):
    """All (message, v, u, x) tuples, built from the formulas above."""
    N = 1 << n
    G = kron_polar(n)
    K = len(info_set)
    out = []
    for bits in itertools.product((0, 1), repeat=K):
        msg = np.array(bits[::-1], dtype=np.int64)  # message index k <-> bit k
        v = np.zeros(N, dtype=np.int64)
        v[list(info_set)] = msg
        u = precode_by_formula(mode, poly, v, info_set, n)
        x = (u @ G) % 2
        out.append((msg, v, u, x))
    return out


def census_by_formula(mode: str, poly, info_set, n):
    """(wmin, spectrum, coset counts keyed by first nonzero index of u)."""
    book = codebook(mode, poly, info_set, n)
    spectrum: dict[int, int] = {}
    for _, _, _, x in book:
        w = int(x.sum())
        if w:
            spectrum[w] = spectrum.get(w, 0) + 1
    wmin = min(spectrum)
    cosets: dict[int, int] = {}
    for _, _, u, x in book:
        if int(x.sum()) == wmin:
            i = int(np.flatnonzero(u)[0])
            cosets[i] = cosets.get(i, 0) + 1
    return wmin, spectrum, cosets


def min_sed(y, codewords) -> float:
    s = 1.0 - 2.0 * np.asarray(codewords, dtype=np.float64)
    return float(((np.asarray(y)[None, :] - s) ** 2).sum(axis=1).min())


def reference_sphere(G, info_mask, y, L=1, use_bound=True):
    """Recursive depth-first list sphere decoder written straight from the
    protocol: best child first, strict '>' pruning against the threshold.

    Returns (sorted leaf metrics, nodes kept, leaves reached).
    """
    N = len(y)
    G = np.asarray(G, dtype=np.int64)
    lam = np.minimum((np.asarray(y) - 1) ** 2, (np.asarray(y) + 1) ** 2) if use_bound else np.zeros(N)
    lam_prefix = np.concatenate([[0.0], np.cumsum(lam)])
    leaves: list[float] = []
    stats = {"nodes": 0, "leaves": 0}

    def threshold():
        return math.inf if len(leaves) < L else sorted(leaves)[L - 1]

    def visit(level, v, pm):
        x_l = int(sum(v[j] * G[j, level] for j in range(level, N)) % 2)
        options = []
        for b in ((0, 1) if info_mask[level] else (0,)):
            bit = x_l ^ b  # G has unit diagonal
            options.append((float((y[level] - (1 - 2 * bit)) ** 2), b))
        options.sort(key=lambda t: t[0])  # stable: ties keep b = 0 first
        for cost, b in options:
            m = pm + cost
            if m + lam_prefix[level] > threshold():
                break
            stats["nodes"] += 1
            v[level] = b
            if level == 0:
                stats["leaves"] += 1
                if len(leaves) < L or m < threshold():
                    leaves.append(m)
                    leaves.sort()
                    del leaves[L:]
            else:
                visit(level - 1, v, m)
            v[level] = 0

    visit(N - 1, [0] * N, 0.0)
    return leaves, stats["nodes"], stats["leaves"]


def bhattacharyya_plain(n: int, design_snr_db: float, rate: float) -> np.ndarray:
    """Linear-domain recursion z -> (2z - z^2, z^2), bit i_0 applied first."""
    z0 = math.exp(-rate * 10 ** (design_snr_db / 10))
    out = np.empty(1 << n)
    for i in range(1 << n):
        z = z0
        for b in range(n):
            z = z * z if (i >> b) & 1 else 2 * z - z * z
        out[i] = z
    return out


def low_weight_codewords(G_info: np.ndarray, max_weight: int):
    """All nonzero codewords of weight <= max_weight as index tuples.

    A codeword c satisfies H c = 0 for a parity-check matrix H; split the
    support into a pivot part and look syndromes up in a table.
    """
    K, N = G_info.shape
    H = parity_check(G_info)
    cols = [int("".join(map(str, H[:, j][::-1])), 2) if H.shape[0] else 0 for j in range(N)]
    half = max_weight // 2
    table: dict[int, list[tuple[int, ...]]] = {}
    for w in range(0, half + 1):
        for s in itertools.combinations(range(N), w):
            syn = 0
            for j in s:
                syn ^= cols[j]
            table.setdefault(syn, []).append(s)
    found = set()
    for w in range(0, max_weight - half + 1):
        for s in itertools.combinations(range(N), w):
            syn = 0
            for j in s:
                syn ^= cols[j]
            for t in table.get(syn, ()):
                sup = frozenset(s) ^ frozenset(t)
                if 0 < len(sup) <= max_weight:
                    found.add(tuple(sorted(sup)))
    return sorted(found)


def parity_check(G: np.ndarray) -> np.ndarray:
    """H with G H^T = 0 over GF(2) via reduced row echelon form."""
    A = np.array(G, dtype=np.uint8) % 2
    K, N = A.shape
    pivots = []
    r = 0
    for c in range(N):
        hits = np.flatnonzero(A[r:, c]) + r if r < K else []
        if len(hits) == 0:
            continue
        p = hits[0]
        A[[r, p]] = A[[p, r]]
        for q in range(K):
            if q != r and A[q, c]:
                A[q] ^= A[r]
        pivots.append(c)
        r += 1
        if r == K:
            break
    free = [c for c in range(N) if c not in pivots]
    H = np.zeros((len(free), N), dtype=np.uint8)
    for k, f in enumerate(free):
        H[k, f] = 1
        for row, pc in enumerate(pivots):
            H[k, pc] = A[row, f]
    return H


def polar_input(G, x):
    """u with u G = x for the (self-inverse) polar transform."""
    return (np.asarray(x) @ G) % 2
