"""Command-line surface: sieve management, construction, sweeps,
set comparisons, and the verification runner.

Exit codes: 0 success, 2 config error, 3 capacity error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

from .construction import ConstructionParams, enumerate_members, interval_index
from .errors import CacheError, CapacityError, ConfigError, LcmlabError
from .experiments import (
    RunConfig,
    compare_csv,
    json_report,
    load_regressions,
    run_compare,
    run_sweep,
    run_verify,
    sweep_csv,
)
from .sets import Explicit, ExactlyKAlmost, PrimeFilter, Primes, SmoothSquarefree, TaoConstruction, write_explicit
from .sieve import SpfTable, build_spf, load_cache, save_cache

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_VERIFY = 4


def default_cache_dir() -> Path:
    override = os.environ.get("LCMLAB_CACHE_DIR")
    if override:
        return Path(override)
    return Path.home() / ".cache" / "lcmlab"


def cache_path_for(limit: int) -> Path:
    return default_cache_dir() / f"spf_{limit}.bin"


def get_table(limit: int, cache: str | None, allow_large: bool = False) -> SpfTable:
    """Load a valid cache covering the limit, else build (and cache if asked)."""
    path = Path(cache) if cache else cache_path_for(limit)
    if path.exists():
        try:
            table = load_cache(path)
            if table.limit >= limit:
                return table
        except CacheError:
            pass  # rebuild below; sieve cmd reports cache problems explicitly
    table = build_spf(limit, allow_large=allow_large)
    if cache:
        path.parent.mkdir(parents=True, exist_ok=True)
        save_cache(table, path)
    return table


def cmd_sieve(args) -> int:
    path = Path(args.cache) if args.cache else cache_path_for(args.limit)
    if path.exists():
        try:
            table = load_cache(path)
            if table.limit == args.limit:
                print(f"cache valid: {path} (limit {table.limit})")
                return EXIT_OK
        except CacheError as exc:
            print(f"rebuilding, cache invalid: {exc}", file=sys.stderr)
    table = build_spf(args.limit, allow_large=args.allow_large)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_cache(table, path)
    print(f"wrote {path} (limit {table.limit}, checksum {table.checksum():08x})")
    return EXIT_OK


def cmd_construct(args) -> int:
    if not args.out:
        raise ConfigError("construct requires --out")
    if args.x_max > args.sieve_limit:
        raise ConfigError(f"x_max {args.x_max} exceeds sieve limit {args.sieve_limit}")
    limit = args.sieve_limit or max(int(args.x_max), 2)
    table = get_table(limit, args.cache, allow_large=args.allow_large)
    params = ConstructionParams(args.c0)
    elements = enumerate_members(args.x_max, params, table)
    write_explicit(args.out, elements, header=f"lcmlab construct C0={args.c0} x={args.x_max}")
    total = math.fsum(1.0 / n for n in elements.tolist())
    k_lo = interval_index(int(elements[0]), params) if len(elements) else None
    k_hi = interval_index(int(elements[-1]), params) if len(elements) else None
    sidecar = {
        "C0": args.c0,
        "x": args.x_max,
        "k_range": [k_lo, k_hi],
        "count": int(len(elements)),
        "S": total,
    }
    with open(str(args.out) + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {args.out} ({len(elements)} elements, S={total!r})")
    return EXIT_OK


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_from(args) -> RunConfig:
    grid = None
    if getattr(args, "grid_list", None):
        grid = [float(g) for g in args.grid_list.split(",")]
    cfg = RunConfig(
        c0=args.c0,
        x_max=args.x_max,
        sieve_limit=args.sieve_limit,
        points_per_interval=getattr(args, "grid", 8),
        grid=grid,
        pairwise_cap=getattr(args, "pairwise_cap", 20_000),
        c_lgr=getattr(args, "c_lgr", 0.01),
        seed=getattr(args, "seed", 1),
    )
    cfg.validate()
    return cfg


def cmd_sweep(args) -> int:
    config = _config_from(args)
    table = get_table(config.sieve_limit, args.cache, allow_large=args.allow_large)
    rows = run_sweep(config, table)
    if args.format == "csv":
        _write_output(sweep_csv(rows), args.out)
    else:
        _write_output(json_report(config, table, rows), args.out)
    return EXIT_OK


def parse_set_spec(text: str, c0: float) -> object:
    if text == "tao":
        return TaoConstruction(ConstructionParams(c0))
    if text == "primes":
        return Primes()
    if text.startswith("kalmost:"):
        return ExactlyKAlmost(PrimeFilter(hi=math.inf), int(text.split(":", 1)[1]))
    if text == "smooth":
        return SmoothSquarefree(PrimeFilter(hi=math.inf))
    if text.startswith("file:"):
        return Explicit(text.split(":", 1)[1])
    raise ConfigError(f"unknown set spec {text!r} (expected tao|primes|kalmost:K|smooth|file:PATH)")


def cmd_compare(args) -> int:
    config = _config_from(args)
    table = get_table(config.sieve_limit, args.cache, allow_large=args.allow_large)
    x_grid = [float(v) for v in args.x.split(",")]
    if any(x > table.limit for x in x_grid):
        raise CapacityError(f"comparison points exceed sieve limit {table.limit}")
    specs = []
    for text in args.set or ["tao", "primes"]:
        spec = parse_set_spec(text, config.c0)
        # cap open-ended prime filters at the sieve limit
        if isinstance(spec, (ExactlyKAlmost, SmoothSquarefree)) and math.isinf(spec.primes.hi):
            flt = PrimeFilter(hi=float(table.limit))
            spec = (
                ExactlyKAlmost(flt, spec.k)
                if isinstance(spec, ExactlyKAlmost)
                else SmoothSquarefree(flt)
            )
        specs.append(spec)
    rows = run_compare(specs, x_grid, table)
    if args.format == "json":
        _write_output(json_report(config, table, rows), args.out)
    else:
        _write_output(compare_csv(rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _config_from(args)
    table = get_table(config.sieve_limit, args.cache, allow_large=args.allow_large)
    try:
        regressions = load_regressions()
    except (OSError, json.JSONDecodeError) as exc:
        regressions = {"error": str(exc)}
    checks = run_verify(config, table, regressions=regressions)
    verdict = {
        "config": config.as_dict(),
        "sieve_checksum": f"{table.checksum():08x}",
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
    text = json.dumps(verdict, indent=2, sort_keys=True) + "\n"
    _write_output(text, args.out)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['name']}", file=sys.stderr)
    return EXIT_OK if verdict["passed"] else EXIT_VERIFY


def _add_common(p, with_sweep_opts: bool = True):
    p.add_argument("--c0", type=float, default=5.0, help="construction parameter C0")
    p.add_argument("--x-max", dest="x_max", type=float, default=1e6)
    p.add_argument("--sieve-limit", dest="sieve_limit", type=int, default=10**6)
    p.add_argument("--cache", default=None, help="sieve cache file path")
    p.add_argument("--allow-large", action="store_true", help="permit sieve limits up to 10^8")
    if with_sweep_opts:
        p.add_argument("--grid", type=int, default=8, help="grid points per interval")
        p.add_argument("--grid-list", default=None, help="explicit comma-separated grid")
        p.add_argument("--pairwise-cap", dest="pairwise_cap", type=int, default=20_000)
        p.add_argument("--c-lgr", dest="c_lgr", type=float, default=0.01)
        p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lcmlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sieve", help="build and cache the SPF table")
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--cache", default=None)
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("construct", help="enumerate the construction up to x")
    _add_common(p, with_sweep_opts=False)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sweep", help="observable sweep over a log-spaced grid")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="compare reference sets at given x values")
    _add_common(p)
    p.add_argument("--set", action="append", help="tao|primes|kalmost:K|smooth|file:PATH")
    p.add_argument("--x", default="1000000", help="comma-separated x values")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the invariant and regression suite")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapacityError,) as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except LcmlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
