"""Monte-Carlo BLER sweeps, the union-bound approximation and census tables."""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .baseline import scl_decode, sc_decode
from .census import WeightCensus
from .channel import ebn0_to_sigma2, stream
from .polar import CONSTRUCTIONS, CodeSpec, build_info_set, row_weight
from .precode import EffectiveGenerator, Mode, PrecodeSpec, effective_generator, parse_mode
from .sphere import list_sphere_decode, sphere_decode_batch

RESULT_HEADER = ("ebn0_db", "trials", "block_errors", "bler", "mean_nodes", "wall_time_s")
CENSUS_HEADER = ("coset_index", "row_weight", "count", "scheme", "wmin", "method",
                 "list_size", "truncated")
ML_MAX_K = 16


class ConfigError(ValueError):
    """Invalid or inconsistent simulation settings."""


def parse_grid(text) -> list[float]:
    """``"1,2,3.5"`` or ``"start:step:stop"`` (stop inclusive)."""
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    text = str(text).strip()
    if text.count(":") == 2:
        start, step, stop = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ConfigError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(count)]
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def parse_decoder(text: str) -> tuple[str, int]:
    kind, _, arg = str(text).strip().lower().partition(":")
    if kind not in ("sd", "lsd", "sc", "scl", "ml"):
        raise ConfigError(f"unknown decoder {text!r}; expected sd | lsd:L | sc | scl:L | ml")
    if kind in ("lsd", "scl"):
        try:
            size = int(arg)
        except ValueError:
            raise ConfigError(f"decoder {kind} needs a list size, e.g. {kind}:8") from None
        if size < 1:
            raise ConfigError("list size must be >= 1")
        return kind, size
    if arg:
        raise ConfigError(f"decoder {kind} takes no argument")
    return kind, 1


@dataclass
class SimConfig:
    n: int = 6
    K: int = 14
    construction: str = "bhattacharyya"
    design_snr_db: float = 0.0
    info_set: str | None = None
    poly: str = "1"
    mode: str = "none"
    decoder: str = "sd"
    snr: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])
    max_trials: int = 1_000_000
    target_errors: int = 100
    seed: int = 0
    output: str | None = None
    workers: int = 1
    block_size: int = 1000
    use_bound: bool = True

    def validate(self) -> "SimConfig":
        if self.construction not in CONSTRUCTIONS:
            raise ConfigError(f"construction must be one of {CONSTRUCTIONS}")
        if self.info_set and self.construction != "explicit":
            self.construction = "explicit"
        if self.construction == "explicit" and not self.info_set:
            raise ConfigError("explicit construction needs info_set")
        grid = [float(s) for s in self.snr]
        if not grid:
            raise ConfigError("empty SNR grid")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("SNR grid must be strictly increasing")
        if self.target_errors < 1:
            raise ConfigError("target_errors must be >= 1")
        if self.max_trials < 1 or self.block_size < 1 or self.workers < 1:
            raise ConfigError("max_trials, block_size and workers must be >= 1")
        parse_decoder(self.decoder)
        try:
            parse_mode(self.mode)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    def build(self) -> tuple[CodeSpec, PrecodeSpec, EffectiveGenerator]:
        self.validate()
        try:
            code = build_info_set(self.n, self.K, self.construction, self.design_snr_db,
                                  path=self.info_set)
            spec = PrecodeSpec(self.poly, self.mode)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return code, spec, effective_generator(spec, code)


_INT_KEYS = {"n", "K", "max_trials", "target_errors", "seed", "workers", "block_size"}
_FLOAT_KEYS = {"design_snr_db"}
_KEY_ALIASES = {"k": "K", "target_block_errors": "target_errors", "snr_grid_db": "snr",
                "snr_db": "snr", "polynomial": "poly", "info_set_file": "info_set",
                "design_snr": "design_snr_db"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    names = {f.name for f in fields(SimConfig)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = _KEY_ALIASES.get(key, key)
        if key not in names:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = coerce_value(key, value)
    return out


def coerce_value(key: str, value):
    try:
        if key in _INT_KEYS:
            return int(float(value)) if isinstance(value, str) and "e" in value.lower() else int(value)
        if key in _FLOAT_KEYS:
            return float(value)
        if key == "snr":
            return parse_grid(value)
        if key == "use_bound":
            return str(value).lower() in ("1", "true", "yes", "on")
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return value


def load_config(path=None, **overrides) -> SimConfig:
    values = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for key, value in overrides.items():
        if value is not None:
            values[key] = coerce_value(key, value) if isinstance(value, str) else value
    return SimConfig(**values).validate()


@dataclass(frozen=True)
class SimRow:
    ebn0_db: float
    trials: int
    block_errors: int
    bler: float
    mean_nodes: float
    wall_time_s: float


@dataclass
class SimResult:
    rows: list[SimRow]

    def to_csv(self, include_time: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(RESULT_HEADER)
        for r in self.rows:
            w.writerow([repr(float(r.ebn0_db)), r.trials, r.block_errors, repr(float(r.bler)),
                        repr(float(r.mean_nodes)),
                        repr(float(r.wall_time_s)) if include_time else "0.0"])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SimResult":
        reader = csv.reader(io.StringIO(text))
        header = tuple(next(reader))
        if header != RESULT_HEADER:
            raise ValueError(f"unexpected header {header}")
        rows = [SimRow(float(a), int(b), int(c), float(d), float(e), float(f))
                for a, b, c, d, e, f in reader]
        return cls(rows)

    def bler_at(self, ebn0_db: float) -> float:
        for r in self.rows:
            if r.ebn0_db == ebn0_db:
                return r.bler
        raise KeyError(ebn0_db)


def snr_at_bler(result: SimResult, target: float) -> float:
    """Eb/N0 where the curve crosses ``target``, interpolating log10(BLER) linearly."""
    pts = [(r.ebn0_db, r.bler) for r in result.rows if r.bler > 0]
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b0 >= target >= b1 and b0 != b1:
            t = (math.log10(b0) - math.log10(target)) / (math.log10(b0) - math.log10(b1))
            return s0 + t * (s1 - s0)
    raise ValueError(f"BLER {target} is not bracketed by the simulated points")


class _Decoder:
    def __init__(self, config: SimConfig, code: CodeSpec, gen: EffectiveGenerator):
        self.kind, self.size = parse_decoder(config.decoder)
        self.code, self.gen, self.use_bound = code, gen, config.use_bound
        if self.kind in ("sd", "lsd") and not gen.triangular:
            raise ConfigError(f"decoder {config.decoder} needs a triangular generator; "
                              f"mode {gen.spec.mode.value} does not give one")
        if self.kind in ("sc", "scl") and gen.spec.mode is not Mode.NONE:
            raise ConfigError("SC/SCL baselines only decode plain polar codes (mode none)")
        if self.kind == "ml":
            if code.K > ML_MAX_K:
                raise ConfigError(f"ml decoder is limited to K <= {ML_MAX_K}")
            K = code.K
            msgs = ((np.arange(1 << K)[:, None] >> np.arange(K)) & 1).astype(np.uint8)
            self.book_msgs = msgs
            self.book = 1.0 - 2.0 * gen.encode_messages(msgs)

    def __call__(self, Y: np.ndarray, sigma2: float):
        """Decode each row; returns (messages, nodes visited per row)."""
        T = Y.shape[0]
        info = list(self.code.info_set)
        if self.kind == "sd":
            V, _, nodes = sphere_decode_batch(self.gen, self.code, Y, self.use_bound)
            return V[:, info], nodes
        nodes = np.zeros(T, dtype=np.int64)
        out = np.zeros((T, self.code.K), dtype=np.uint8)
        if self.kind == "ml":
            return self.book_msgs[np.argmax(Y @ self.book.T, axis=1)], nodes
        for t in range(T):
            if self.kind == "lsd":
                best = list_sphere_decode(self.gen, self.code, Y[t], self.size, self.use_bound)[0]
                out[t], nodes[t] = best.message_hat, best.nodes_visited
            elif self.kind == "sc":
                out[t] = sc_decode(self.code, 2.0 * Y[t] / sigma2)
            else:
                out[t] = scl_decode(self.code, 2.0 * Y[t] / sigma2, self.size)
        return out, nodes


def _simulate_block(decoder: _Decoder, seed: int, snr_index: int, block: int,
                    size: int, sigma2: float):
    code = decoder.code
    rng = stream(seed, snr_index, block)
    msgs = rng.integers(0, 2, size=(size, code.K), dtype=np.uint8)
    noise = rng.standard_normal((size, code.N))
    Y = 1.0 - 2.0 * decoder.gen.encode_messages(msgs) + math.sqrt(sigma2) * noise
    decoded, nodes = decoder(Y, sigma2)
    return np.any(decoded != msgs, axis=1), nodes


def run_bler(config: SimConfig, progress=None) -> SimResult:
    """BLER per Eb/N0 point, stopping at ``target_errors`` errors or ``max_trials`` trials.

    Trials are generated in fixed-size blocks, block ``b`` of SNR point ``s``
    drawing from ``stream(seed, s, b)``; blocks are reduced in order and the
    count is cut at the exact stopping trial, so the number of workers never
    changes the result.
    """
    code, spec, gen = config.build()
    decoder = _Decoder(config, code, gen)
    rows = []
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for s_idx, ebn0 in enumerate(config.snr):
            t0 = time.perf_counter()
            sigma2 = ebn0_to_sigma2(ebn0, code.rate)
            trials = errors = 0
            node_sum = 0
            block = 0
            done = False
            while not done:
                wave = [pool.submit(_simulate_block, decoder, config.seed, s_idx, block + j,
                                    config.block_size, sigma2)
                        for j in range(config.workers)]
                block += config.workers
                for fut in wave:
                    if done:
                        fut.cancel()
                        continue
                    errs, nodes = fut.result()
                    take = min(errs.size, config.max_trials - trials)
                    cum = np.cumsum(errs[:take])
                    need = config.target_errors - errors
                    hit = np.searchsorted(cum, need)
                    if hit < take:
                        take = int(hit) + 1
                        done = True
                    errors += int(errs[:take].sum())
                    node_sum += int(nodes[:take].sum())
                    trials += take
                    if trials >= config.max_trials:
                        done = True
            row = SimRow(float(ebn0), trials, errors, errors / trials, node_sum / trials,
                         time.perf_counter() - t0)
            rows.append(row)
            if progress is not None:
                progress(row)
    return SimResult(rows)


def q_function(x: float) -> float:
    """Standard normal tail probability."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def union_bound_value(A: int, d: int, rate: float, ebn0_db: float) -> float:
    return A * q_function(math.sqrt(2.0 * d * rate * 10.0 ** (ebn0_db / 10.0)))


def union_bound(code: CodeSpec, census: WeightCensus, ebn0_db: float) -> float:
    """``A_wmin * Q(sqrt(2 wmin R Eb/N0))``."""
    if census is None or census.wmin <= 0:
        raise ValueError("census carries no minimum weight")
    return union_bound_value(census.total, census.wmin, code.rate, ebn0_db)


def _same_code(censuses):
    if not censuses:
        raise ValueError("no censuses to tabulate")
    first = censuses[0].code
    for c in censuses[1:]:
        if c.code != first:
            raise ValueError(f"censuses mix rate profiles {first} and {c.code}")
    return first


def census_rows(census: WeightCensus) -> list[tuple]:
    n = census.code.n
    return [(i, row_weight(n, i), cnt, census.scheme, census.wmin, census.method,
             census.list_size, census.truncated)
            for i, cnt in sorted(census.coset_counts.items())]


def census_csv(censuses: list[WeightCensus]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CENSUS_HEADER)
    for c in censuses:
        for row in census_rows(c):
            w.writerow([*row[:-1], str(row[-1]).lower()])
    return buf.getvalue()


def census_table(censuses: list[WeightCensus], shape: str = "cosets") -> tuple[str, str]:
    """Render censuses side by side; returns ``(text, csv)``.

    ``shape="cosets"`` lists the count per coset leader ``i`` for each
    scheme; ``shape="summary"`` lists ``wmin`` and the total per scheme.
    Cells for frozen rows of a plain polar code are left blank.
    """
    code = _same_code(censuses)
    names = [c.scheme for c in censuses]
    if shape == "summary":
        lines = [f"code {code}", f"{'scheme':<12} {'wmin':>5} {'A_wmin':>8}"]
        for c in censuses:
            mark = "" if c.method == "exhaustive" and not c.truncated else f"  ({c.method}, L={c.list_size})"
            lines.append(f"{c.scheme:<12} {c.wmin:>5} {c.total:>8}{mark}")
        return "\n".join(lines) + "\n", census_csv(censuses)
    if shape != "cosets":
        raise ValueError(f"unknown table shape {shape!r}")
    rows = sorted(set().union(*(c.coset_counts for c in censuses)))
    info = set(code.info_set)
    width = max(10, *(len(s) + 2 for s in names))
    head = f"{'i':>4} {'w(g_i)':>7} " + "".join(f"{s:>{width}}" for s in names)
    wline = f"{'':>4} {'wmin':>7} " + "".join(f"{c.wmin:>{width}}" for c in censuses)
    lines = [f"code {code}", head, wline, "-" * len(head)]
    for i in rows:
        cells = []
        for c in censuses:
            if c.spec.mode is Mode.NONE and i not in info:
                cells.append(f"{'':>{width}}")
            else:
                cells.append(f"{c.coset_counts.get(i, 0):>{width}}")
        lines.append(f"{i:>4} {row_weight(code.n, i):>7} " + "".join(cells))
    lines.append("-" * len(head))
    lines.append(f"{'Total':>12} " + "".join(f"{c.total:>{width}}" for c in censuses))
    return "\n".join(lines) + "\n", census_csv(censuses)
