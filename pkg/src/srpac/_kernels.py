"""numba kernels for the tree search and the exhaustive enumeration."""

from __future__ import annotations

import numba
import numpy as np
from numba import njit, prange

# try OpenMP before TBB: an old libtbb triggers a warning on every parallel run
numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]

INF = np.inf


@njit(cache=True, inline="always")
def _bm(yl, x):
    d = yl - (1.0 - 2.0 * x)
    return d * d


@njit(cache=True, inline="always")
def _xor_row(par, rows, row):
    # strictly-lower support never reaches past word row // 64
    for w in range((row >> 6) + 1):
        par[w] ^= rows[row, w]


@njit(cache=True, inline="always")
def _par(par, level):
    return np.uint8((par[level >> 6] >> np.uint64(level & 63)) & np.uint64(1))


@njit(cache=True, inline="always")
def _sift_down(heap, metric, size, pos):
    while True:
        left = 2 * pos + 1
        if left >= size:
            return
        big = left
        right = left + 1
        if right < size and metric[heap[right]] > metric[heap[left]]:
            big = right
        if metric[heap[big]] > metric[heap[pos]]:
            tmp = heap[big]
            heap[big] = heap[pos]
            heap[pos] = tmp
            pos = big
        else:
            return


@njit(cache=True, inline="always")
def _sift_up(heap, metric, pos):
    while pos > 0:
        parent = (pos - 1) // 2
        if metric[heap[pos]] > metric[heap[parent]]:
            tmp = heap[pos]
            heap[pos] = heap[parent]
            heap[parent] = tmp
            pos = parent
        else:
            return


@njit(cache=True, inline="always")
def _frozen_run(m, hi, lo, d0, dd, d0_prefix, byte_sums, lam_prefix, par, thr):
    """Walk frozen levels ``hi`` down to ``lo``; returns (metric, survived, nodes).

    Along a frozen run ``metric + lam_prefix`` never decreases (each branch
    metric is at least its lower bound), so a byte-aligned chunk of levels
    survives iff its last level does. Whole chunks are summed from per-byte
    tables; only a failing chunk is walked level by level.
    """
    count = 0
    k = hi
    while k >= lo:
        start = (k >> 3) << 3
        bot = start if start > lo else lo
        byte = (par[k >> 6] >> np.uint64(start & 63)) & np.uint64(0xFF)
        mask = np.uint64(((1 << (k - start + 1)) - 1) ^ ((1 << (bot - start)) - 1))
        m_end = m + (d0_prefix[k + 1] - d0_prefix[bot]) + byte_sums[k >> 3, byte & mask]
        if m_end + lam_prefix[bot] <= thr:
            count += k - bot + 1
            m = m_end
        else:
            for j in range(k, bot - 1, -1):
                m += d0[j] + np.float64((par[j >> 6] >> np.uint64(j & 63)) & np.uint64(1)) * dd[j]
                if m + lam_prefix[j] > thr:
                    return m, False, count
                count += 1
        k = bot - 1
    return m, True, count


@njit(cache=True, inline="always")
def _byte_sums(dd):
    """``out[c, x]``: sum of ``dd[8c + b]`` over the set bits ``b`` of ``x``."""
    N = dd.shape[0]
    chunks = (N + 7) >> 3
    out = np.empty((chunks, 256))
    for c in range(chunks):
        out[c, 0] = 0.0
        for b in range(8):
            j = 8 * c + b
            add = dd[j] if j < N else 0.0
            step = 1 << b
            for x in range(step):
                out[c, step + x] = out[c, x] + add
    return out


@njit(cache=True, inline="always")
def _store_leaf(m, v, out_v, out_m, heap, held, list_size, thr):
    if held < list_size:
        out_m[held] = m
        out_v[held, :] = v
        heap[held] = held
        _sift_up(heap, out_m, held)
        held += 1
        if held == list_size:
            thr = out_m[heap[0]]
    elif m < thr:
        slot = heap[0]
        out_m[slot] = m
        out_v[slot, :] = v
        _sift_down(heap, out_m, held, 0)
        thr = out_m[heap[0]]
    return held, thr


@njit(cache=True, nogil=True)
def tree_search(y, lam_prefix, rows, is_info, list_size, radius_sq):
    """Depth-first search from level N-1 down to 0 keeping ``list_size`` leaves.

    The pruning threshold is ``radius_sq`` until ``list_size`` leaves are
    held, then the largest held metric. A node at level ``l`` is dropped when its
    partial metric plus ``lam_prefix[l]`` strictly exceeds the threshold.
    Frozen levels have a single child, so each run of them between two
    information levels is walked in one loop.
    Returns (leaf inputs, leaf metrics, number held, nodes kept, leaves reached);
    held leaves are in slot order, not sorted.
    """
    N = y.shape[0]
    d0 = np.empty(N)
    d1 = np.empty(N)
    dd = np.empty(N)
    for i in range(N):
        d0[i] = (y[i] - 1.0) ** 2
        d1[i] = (y[i] + 1.0) ** 2
        dd[i] = d1[i] - d0[i]
    d0_prefix = np.zeros(N + 1)
    for i in range(N):
        d0_prefix[i + 1] = d0_prefix[i] + d0[i]
    byte_sums = _byte_sums(dd)
    K = 0
    for i in range(N):
        K += is_info[i]
    lev = np.empty(K, np.int64)  # information levels, descending
    k = 0
    for i in range(N - 1, -1, -1):
        if is_info[i]:
            lev[k] = i
            k += 1

    par = np.zeros(rows.shape[1], np.uint64)
    v = np.zeros(N, np.uint8)
    base = np.zeros(K + 1)
    first = np.zeros(K, np.uint8)
    stage = np.zeros(K, np.uint8)  # children tried so far at each information depth
    cur = np.zeros(K, np.uint8)
    cost_a = np.zeros(K)
    cost_b = np.zeros(K)

    out_v = np.zeros((list_size, N), np.uint8)
    out_m = np.full(list_size, INF)
    heap = np.zeros(list_size, np.int64)
    held = 0
    thr = radius_sq
    nodes = 0
    leaves = 0

    top_lo = lev[0] + 1 if K > 0 else 0
    m, ok, cnt = _frozen_run(0.0, N - 1, top_lo, d0, dd, d0_prefix, byte_sums, lam_prefix, par, thr)
    nodes += cnt
    if not ok:
        return out_v, out_m, held, nodes, leaves
    if K == 0:
        leaves += 1
        held, thr = _store_leaf(m, v, out_v, out_m, heap, held, list_size, thr)
        return out_v, out_m, held, nodes, leaves

    d = 0
    base[0] = m
    while d >= 0:
        lvl = lev[d]
        if stage[d] == 0:
            # order the two children by branch metric
            if (par[lvl >> 6] >> np.uint64(lvl & 63)) & np.uint64(1):
                c0 = d1[lvl]
                c1 = d0[lvl]
            else:
                c0 = d0[lvl]
                c1 = d1[lvl]
            if c0 <= c1:
                first[d] = 0
                cost_a[d] = c0
                cost_b[d] = c1
            else:
                first[d] = 1
                cost_a[d] = c1
                cost_b[d] = c0
            stage[d] = 1
            m = base[d] + cost_a[d]
            b = first[d]
        else:
            if cur[d]:
                cur[d] = 0
                v[lvl] = 0
                _xor_row(par, rows, lvl)
            if stage[d] == 2:
                d -= 1
                continue
            stage[d] = 2
            m = base[d] + cost_b[d]
            b = 1 - first[d]
        if m + lam_prefix[lvl] > thr:
            # children are cost-ordered, so the sibling cannot survive either
            d -= 1
            continue
        nodes += 1
        if b:
            cur[d] = 1
            v[lvl] = 1
            _xor_row(par, rows, lvl)
        lo = lev[d + 1] + 1 if d + 1 < K else 0
        m, ok, cnt = _frozen_run(m, lvl - 1, lo, d0, dd, d0_prefix, byte_sums, lam_prefix, par, thr)
        nodes += cnt
        if not ok:
            continue
        if d + 1 == K:
            leaves += 1
            held, thr = _store_leaf(m, v, out_v, out_m, heap, held, list_size, thr)
            continue
        d += 1
        base[d] = m
        stage[d] = 0
    return out_v, out_m, held, nodes, leaves


@njit(cache=True, nogil=True)
def lambda_prefix(y, use_bound):
    N = y.shape[0]
    out = np.zeros(N + 1)
    if use_bound:
        for i in range(N):
            a = y[i] - 1.0
            c = y[i] + 1.0
            out[i + 1] = out[i] + min(a * a, c * c)
    return out


@njit(cache=True, nogil=True)
def sd_batch(Y, rows, is_info, use_bound):
    """Sphere-decode every row of ``Y``; returns (v_hat, sed, nodes)."""
    T, N = Y.shape
    V = np.zeros((T, N), np.uint8)
    sed = np.zeros(T)
    nodes = np.zeros(T, np.int64)
    for t in range(T):
        y = Y[t]
        lp = lambda_prefix(y, use_bound)
        out_v, out_m, held, nd, _ = tree_search(y, lp, rows, is_info, 1, INF)
        V[t, :] = out_v[0]
        sed[t] = out_m[0]
        nodes[t] = nd
    return V, sed, nodes


@njit(cache=True, inline="always")
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True, inline="always")
def _first_set(words):
    for w in range(words.shape[0]):
        x = words[w]
        if x != 0:
            low = x & (~x + np.uint64(1))
            return w * 64 + np.int64(_popcount64(low - np.uint64(1)))
    return -1


@njit(cache=True, parallel=True)
def gray_census(gen_rows, pre_rows, prefix_bits):
    """Weight x coset-leader histogram over all ``2**K`` messages.

    ``gen_rows`` / ``pre_rows`` are the packed rows of the effective generator
    and of the precoding matrix restricted to the information set. The
    message space is split into ``2**prefix_bits`` subtrees on the top bits,
    each walked in Gray-code order; ``hist[w, i]`` counts codewords of weight
    ``w`` whose input ``u`` first becomes nonzero at ``i`` (``hist[0, 0]``
    holds the zero word).
    """
    K, nwords = gen_rows.shape
    N = nwords * 64
    low = K - prefix_bits
    chunks = 1 << prefix_bits
    local = np.zeros((chunks, N + 1, N), np.int64)
    for c in prange(chunks):
        x = np.zeros(nwords, np.uint64)
        u = np.zeros(nwords, np.uint64)
        for b in range(prefix_bits):
            if (c >> b) & 1:
                for w in range(nwords):
                    x[w] ^= gen_rows[low + b, w]
                    u[w] ^= pre_rows[low + b, w]
        for t in range(1 << low):
            if t > 0:
                # bit flipped between Gray codes t-1 and t
                j = 0
                while not (t >> j) & 1:
                    j += 1
                for w in range(nwords):
                    x[w] ^= gen_rows[j, w]
                    u[w] ^= pre_rows[j, w]
            wt = 0
            for w in range(nwords):
                wt += np.int64(_popcount64(x[w]))
            lead = _first_set(u)
            if lead < 0:
                lead = 0
            local[c, wt, lead] += 1
    return local.sum(axis=0)
