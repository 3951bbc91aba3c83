"""``srpac`` command line: construct, encode, decode, census, bler, bound, table.

Exit status is 0 on success, 1 for configuration errors and 2 for
runtime or decoder errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .census import CensusError, exhaustive_census, lsd_census, stable_lsd_census
from .gf2 import as_bits
from .polar import CONSTRUCTIONS, build_info_set
from .precode import PrecodeSpec, effective_generator, encode
from .sim import (ConfigError, SimConfig, census_table, load_config, parse_grid,
                  run_bler, union_bound, union_bound_value, _Decoder)
from .sphere import DecoderError

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _add_code(p: argparse.ArgumentParser, precode: bool = True) -> None:
    g = p.add_argument_group("code")
    g.add_argument("--n", type=int, help="log2 of the block length")
    g.add_argument("--K", "-k", type=int, help="number of information bits")
    g.add_argument("--construction", choices=CONSTRUCTIONS)
    g.add_argument("--design-snr", type=float, dest="design_snr_db",
                   help="Bhattacharyya design Eb/N0 in dB")
    g.add_argument("--info-set", help="file of information indices (implies explicit)")
    if precode:
        g.add_argument("--poly", help="precoding polynomial as bits p_0..p_m, e.g. 1101101")
        g.add_argument("--mode", help="none | forward | reverse | selective_reverse")


def _code_from(args):
    cfg = SimConfig()
    n = args.n if args.n is not None else cfg.n
    K = args.K if args.K is not None else cfg.K
    construction = args.construction or ("explicit" if args.info_set else cfg.construction)
    design = args.design_snr_db if args.design_snr_db is not None else cfg.design_snr_db
    code = build_info_set(n, K, construction, design, path=args.info_set)
    spec = PrecodeSpec(getattr(args, "poly", None) or "1", getattr(args, "mode", None) or "none")
    return code, spec


def _bits(text: str) -> np.ndarray:
    s = text.replace(",", "").replace(" ", "")
    if set(s) - {"0", "1"}:
        raise ConfigError(f"expected a 0/1 string, got {text!r}")
    return as_bits([int(c) for c in s])


def _floats(text: str | None, path: str | None) -> np.ndarray:
    if path:
        text = Path(path).read_text()
    if text is None:
        raise ConfigError("give --y or --y-file")
    return np.array([float(t) for t in text.replace(",", " ").split()])


def cmd_construct(args) -> int:
    code, _ = _code_from(args)
    line = ", ".join(map(str, code.info_set))
    if args.output:
        Path(args.output).write_text(f"# {code}\n{line}\n")
    print(line)
    return EXIT_OK


def cmd_encode(args) -> int:
    code, spec = _code_from(args)
    x = encode(spec, code, _bits(args.message))
    print("".join(map(str, x)))
    return EXIT_OK


def cmd_decode(args) -> int:
    code, spec = _code_from(args)
    y = _floats(args.y, args.y_file)
    if y.shape != (code.N,):
        raise ConfigError(f"expected {code.N} channel values, got {y.size}")
    cfg = SimConfig(n=code.n, K=code.K, decoder=args.decoder, use_bound=not args.no_bound)
    dec = _Decoder(cfg, code, effective_generator(spec, code))
    sigma2 = args.sigma2 if args.sigma2 else 1.0
    msg, nodes = dec(y[None, :], sigma2)
    print("message", "".join(map(str, msg[0])))
    print("nodes", int(nodes[0]))
    return EXIT_OK


def cmd_census(args) -> int:
    code, spec = _code_from(args)
    gen = effective_generator(spec, code)
    if args.method == "exhaustive":
        census = exhaustive_census(gen, code)
    elif args.stable:
        census, _ = stable_lsd_census(gen, code, args.list_size, args.snr, args.seed)
    else:
        census = lsd_census(gen, code, args.list_size, args.snr, args.seed)
    text, csv_text = census_table([census], shape=args.shape)
    print(text, end="")
    if args.csv:
        Path(args.csv).write_text(csv_text)
    return EXIT_OK


def cmd_table(args) -> int:
    code, _ = _code_from(args)
    censuses = []
    for scheme in args.scheme:
        mode, _, poly = scheme.partition(":")
        spec = PrecodeSpec(poly or "1", mode)
        gen = effective_generator(spec, code)
        if args.method == "exhaustive":
            censuses.append(exhaustive_census(gen, code))
        else:
            censuses.append(stable_lsd_census(gen, code, args.list_size, args.snr, args.seed)[0])
    text, csv_text = census_table(censuses, shape=args.shape)
    print(text, end="")
    if args.csv:
        Path(args.csv).write_text(csv_text)
    return EXIT_OK


def cmd_bound(args) -> int:
    code, spec = _code_from(args)
    grid = parse_grid(args.snr)
    if args.wmin is not None and args.A is not None:
        values = [union_bound_value(args.A, args.wmin, code.rate, s) for s in grid]
    else:
        gen = effective_generator(spec, code)
        census = exhaustive_census(gen, code) if args.method == "exhaustive" else \
            stable_lsd_census(gen, code, args.list_size, 20.0, args.seed)[0]
        values = [union_bound(code, census, s) for s in grid]
    print("ebn0_db,bound")
    for s, v in zip(grid, values):
        print(f"{s!r},{v!r}")
    return EXIT_OK


def cmd_bler(args) -> int:
    overrides = {k: getattr(args, k) for k in
                 ("n", "K", "construction", "design_snr_db", "info_set", "poly", "mode", "decoder",
                  "max_trials", "target_errors", "seed", "output", "workers", "block_size")}
    overrides["snr"] = args.snr
    if args.no_bound:
        overrides["use_bound"] = False
    config = load_config(args.config, **overrides)

    def progress(row):
        print(f"{row.ebn0_db:g} dB: {row.block_errors}/{row.trials} bler={row.bler:.3e}",
              file=sys.stderr)

    result = run_bler(config, progress=progress if args.verbose else None)
    text = result.to_csv()
    if config.output:
        Path(config.output).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="srpac", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="print an information set")
    _add_code(p, precode=False)
    p.add_argument("-o", "--output", help="also write the set to this file")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("encode", help="encode a message")
    _add_code(p)
    p.add_argument("--message", required=True, help="K message bits, e.g. 0100")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode one received vector")
    _add_code(p)
    p.add_argument("--decoder", default="sd", help="sd | lsd:L | sc | scl:L | ml")
    p.add_argument("--y", help="received values, comma or space separated")
    p.add_argument("--y-file")
    p.add_argument("--sigma2", type=float, help="noise variance for the LLRs of sc/scl")
    p.add_argument("--no-bound", action="store_true", help="disable the lower-bound pruning")
    p.set_defaults(func=cmd_decode)

    def census_opts(p):
        p.add_argument("--method", choices=("exhaustive", "lsd"), default="exhaustive")
        p.add_argument("--list-size", type=int, default=4096)
        p.add_argument("--snr", type=float, default=20.0, help="Eb/N0 of the lsd census")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--shape", choices=("cosets", "summary"), default="cosets")
        p.add_argument("--csv", help="write census rows to this file")

    p = sub.add_parser("census", help="minimum-weight census of one scheme")
    _add_code(p)
    census_opts(p)
    p.add_argument("--stable", action="store_true", help="double L until the counts settle")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("table", help="side-by-side censuses of several schemes")
    _add_code(p, precode=False)
    census_opts(p)
    p.add_argument("--scheme", action="append", required=True,
                   help="MODE[:POLY], repeatable, e.g. none or selective_reverse:1101101")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("bound", help="union-bound approximation over an SNR grid")
    _add_code(p)
    p.add_argument("--snr", required=True, help="grid: 1,2,3 or start:step:stop")
    p.add_argument("--wmin", type=int)
    p.add_argument("--A", type=int, help="error coefficient (with --wmin skips the census)")
    p.add_argument("--method", choices=("exhaustive", "lsd"), default="exhaustive")
    p.add_argument("--list-size", type=int, default=4096)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("bler", help="Monte-Carlo BLER sweep, CSV output")
    p.add_argument("--config", help="key = value file; flags override it")
    _add_code(p)
    p.add_argument("--decoder", help="sd | lsd:L | sc | scl:L | ml")
    p.add_argument("--snr", help="grid: 1,2,3 or start:step:stop")
    p.add_argument("--max-trials", type=int)
    p.add_argument("--target-errors", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--block-size", type=int)
    p.add_argument("--output", "-o")
    p.add_argument("--no-bound", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_bler)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DecoderError, CensusError, RuntimeError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
