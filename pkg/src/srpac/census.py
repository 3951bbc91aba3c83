"""Minimum-weight codeword censuses: exhaustive enumeration and the
list-sphere-decoder method at high SNR."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .channel import awgn, bpsk_modulate, ebn0_to_sigma2, stream
from .polar import CodeSpec, min_distance
from .precode import EffectiveGenerator, PrecodeSpec
from .sphere import list_sphere_decode

DEFAULT_MAX_K = 20
DEFAULT_LIST_SIZE = 4096
HIST_BUDGET_BYTES = 64 << 20


class CensusError(ValueError):
    pass


@dataclass
class WeightCensus:
    """Weight spectrum plus per-coset counts of the minimum-weight codewords.

    ``coset_counts`` maps the coset-leader index ``i`` (first nonzero index
    of the polar input ``u``) to the number of weight-``wmin`` codewords in
    that coset. For ``method="lsd"`` the numbers are counts within the list
    and may be lower bounds when ``truncated`` is set.
    """

    wmin: int
    spectrum: dict[int, int]
    coset_counts: dict[int, int]
    method: str
    code: CodeSpec
    spec: PrecodeSpec = field(default_factory=PrecodeSpec)
    list_size: int = 0
    truncated: bool = False

    @property
    def total(self) -> int:
        return self.spectrum.get(self.wmin, 0)

    @property
    def scheme(self) -> str:
        return self.spec.label


def _first_nonzero(U: np.ndarray) -> np.ndarray:
    return np.argmax(U != 0, axis=1)


def _census_from_words(X: np.ndarray, U: np.ndarray):
    weights = X.sum(axis=1, dtype=np.int64)
    if weights.size == 0:
        return 0, {}, {}
    wmin = int(weights.min())
    ws, counts = np.unique(weights, return_counts=True)
    spectrum = {int(w): int(c) for w, c in zip(ws, counts)}
    leads = _first_nonzero(U[weights == wmin])
    li, lc = np.unique(leads, return_counts=True)
    return wmin, spectrum, {int(i): int(c) for i, c in zip(li, lc)}


def exhaustive_census(gen: EffectiveGenerator, code: CodeSpec,
                      max_K: int = DEFAULT_MAX_K) -> WeightCensus:
    """Enumerate all ``2**K - 1`` nonzero messages."""
    if code.K > max_K:
        raise CensusError(f"K={code.K} exceeds the exhaustive limit {max_K}")
    info = list(code.info_set)
    gen_rows = np.ascontiguousarray(gen.matrix.packed[info])
    pre_rows = np.ascontiguousarray(gen.precoder.packed[info])
    words = gen_rows.shape[1]
    per_chunk = (words * 64 + 1) * words * 64 * 8
    prefix = 0
    while prefix < min(4, code.K - 1) and (2 << prefix) * per_chunk <= HIST_BUDGET_BYTES:
        prefix += 1
    hist = _kernels.gray_census(gen_rows, pre_rows, prefix)[:code.N + 1, :code.N]
    hist[0, 0] -= 1  # the zero message
    by_weight = hist.sum(axis=1)
    spectrum = {int(w): int(c) for w, c in enumerate(by_weight) if c and w}
    if hist[0].any():
        raise CensusError("generator is rank deficient on the information set")
    wmin = min(spectrum)
    cosets = {int(i): int(c) for i, c in enumerate(hist[wmin]) if c}
    return WeightCensus(wmin=wmin, spectrum=spectrum, coset_counts=cosets,
                        method="exhaustive", code=code, spec=gen.spec)


def covering_radius_sq(y, weight: int) -> float:
    """Smallest squared radius around ``y`` certain to contain every codeword
    of Hamming weight at most ``weight`` (and the zero codeword).

    Flipping the positions in ``S`` adds ``4 * sum(y[S])`` to the SED of the
    zero word, which the ``weight`` largest positive ``y_i`` bound from above.
    """
    y = np.asarray(y, dtype=np.float64)
    top = np.sort(np.maximum(y, 0.0))[::-1][:weight].sum()
    r2 = float(np.sum((y - 1.0) ** 2) + 4.0 * top)
    return r2 * (1.0 + 1e-12) + 1e-12


def lsd_census(gen: EffectiveGenerator, code: CodeSpec, L: int = DEFAULT_LIST_SIZE,
               snr_db: float = 20.0, seed: int = 0, radius="auto") -> WeightCensus:
    """Send the zero codeword at ``snr_db`` and classify the ``L``-best list.

    ``radius="auto"`` starts the list decoder from a sphere that provably holds
    every codeword up to the polar minimum distance, widening it if that
    sphere holds no nonzero codeword. Leaves inside the sphere come out
    exactly as with an unbounded start, so only the running time changes.
    ``radius=None`` starts from +inf.
    """
    if L < 2:
        raise CensusError("list size must be at least 2")
    rng = stream(seed, 0xCE, code.N, code.K)
    y = awgn(bpsk_modulate(np.zeros(code.N)), ebn0_to_sigma2(snr_db, code.rate), rng)
    weight = min_distance(code)
    while True:
        if radius == "auto":
            r2 = covering_radius_sq(y, weight)
        else:
            r2 = np.inf if radius is None else float(radius)
        found = list_sphere_decode(gen, code, y, L, radius_sq=r2)
        V = np.array([o.v_hat for o in found if o.v_hat.any()], dtype=np.uint8)
        if V.size or radius != "auto" or weight >= code.N:
            break
        weight = min(2 * weight, code.N)
    if V.size == 0:
        raise CensusError("list holds only the zero codeword")
    X = gen.encode_v(V)
    U = gen.precoder.batch_vecmul(V)
    wmin, spectrum, cosets = _census_from_words(X, U)
    return WeightCensus(wmin=wmin, spectrum=spectrum, coset_counts=cosets, method="lsd",
                        code=code, spec=gen.spec, list_size=int(L),
                        truncated=len(found) == L)


def stable_lsd_census(gen: EffectiveGenerator, code: CodeSpec, L: int = DEFAULT_LIST_SIZE,
                      snr_db: float = 20.0, seed: int = 0, max_L: int = 1 << 16,
                      doublings: int = 2) -> tuple[WeightCensus, list[WeightCensus]]:
    """Double ``L`` until ``wmin`` and the coset counts stay fixed across
    ``doublings`` successive doublings (or the list covers the code)."""
    history = []
    while True:
        c = lsd_census(gen, code, L, snr_db=snr_db, seed=seed)
        history.append(c)
        if not c.truncated:
            return c, history
        if len(history) > doublings:
            tail = history[-(doublings + 1):]
            if all(census_compare(tail[0], t).empty for t in tail[1:]):
                return c, history
        if 2 * L > max_L:
            return c, history
        L *= 2


@dataclass
class CensusDiff:
    wmin: tuple[int, int]
    total: tuple[int, int]
    cosets: dict[int, tuple[int, int]]
    truncated: tuple[bool, bool]

    @property
    def empty(self) -> bool:
        return self.wmin[0] == self.wmin[1] and self.total[0] == self.total[1] and not self.cosets

    @property
    def lower_bound(self) -> bool:
        """True when every difference is explained by a truncated side undercounting."""
        if self.empty:
            return True
        if self.wmin[0] != self.wmin[1]:
            return False
        a_low = all(a <= b for a, b in self.cosets.values()) and self.truncated[0]
        b_low = all(b <= a for a, b in self.cosets.values()) and self.truncated[1]
        return a_low or b_low

    def __str__(self) -> str:
        if self.empty:
            return "censuses agree"
        lines = [f"wmin {self.wmin[0]} vs {self.wmin[1]}", f"total {self.total[0]} vs {self.total[1]}"]
        lines += [f"coset {i}: {a} vs {b}" for i, (a, b) in sorted(self.cosets.items())]
        return "\n".join(lines)


def census_compare(a: WeightCensus, b: WeightCensus) -> CensusDiff:
    if a.code != b.code or a.spec != b.spec:
        raise CensusError("censuses describe different codes")
    keys = set(a.coset_counts) | set(b.coset_counts)
    cosets = {}
    for i in sorted(keys):
        ca = a.coset_counts.get(i, 0)
        cb = b.coset_counts.get(i, 0)
        if ca != cb:
            cosets[i] = (ca, cb)
    return CensusDiff(wmin=(a.wmin, b.wmin), total=(a.total, b.total), cosets=cosets,
                      truncated=(a.truncated, b.truncated))
