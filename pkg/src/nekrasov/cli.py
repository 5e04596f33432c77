"""Command line: compute alpha_n, run identity checks, time the reductions.

Exit status: 0 when everything passed, 1 when a check failed, 2 for usage
errors, 3 for corrupt cached data. Every flag may also be given through an
environment variable ``NEKRASOV_<FLAG>`` (e.g. ``NEKRASOV_WORKERS=4``,
``NEKRASOV_CACHE_DIR=...``); explicit flags win.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import dataclass

from .cache import AlphaCache, CacheCorruptionError, cache_key, canonical_dumps, cached_alpha, sha256
from .exactalg import PointSampler, SamplingExhaustedError
from .exactalg.errors import InadmissiblePointError
from .localization import Context, alpha_value
from . import wallcross as wc

ENV_PREFIX = "NEKRASOV_"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3
CHECKS = ("main", "even", "odd", "reduce", "hilbert", "residue", "goal", "counting", "rank1",
          "parity_unit", "symmetry")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    r: int | None = None
    nf: int | None = None
    n: int | None = None
    order: int | None = None
    mode: str = "symbolic"
    points: int = 20
    seed: int = 0
    workers: tuple[int, ...] = (1,)
    cache_dir: str | None = None
    format: str = "json"
    k: int | None = None
    p: int | None = None
    twist: str = "m-e/2"

    def context(self) -> Context:
        if self.r is None:
            raise UsageError("--r is required")
        return Context(self.r, 2 * self.r if self.nf is None else self.nf)

    @property
    def worker_count(self) -> int:
        return self.workers[0]


def _validate(cfg: RunConfig) -> None:
    if cfg.r is not None and cfg.r < 1:
        raise UsageError(f"--r must be at least 1, got {cfg.r}")
    if cfg.nf is not None:
        if cfg.nf < 0:
            raise UsageError(f"--nf must be non-negative, got {cfg.nf}")
        if cfg.r is not None and cfg.nf > 2 * cfg.r:
            raise UsageError(f"--nf={cfg.nf} exceeds 2r={2 * cfg.r}")
    for flag in ("n", "order", "k", "p"):
        value = getattr(cfg, flag)
        if value is not None and value < 0:
            raise UsageError(f"--{flag} must be non-negative, got {value}")
    if cfg.points < 1:
        raise UsageError(f"--points must be at least 1, got {cfg.points}")
    if any(w < 1 for w in cfg.workers):
        raise UsageError("--workers must be at least 1")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in str(text).split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper(), default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=int, default=_env("r"))
    common.add_argument("--nf", type=int, default=_env("nf"), help="number of flavours (default 2r)")
    common.add_argument("--n", type=int, default=_env("n"))
    common.add_argument("--order", type=int, default=_env("order"))
    common.add_argument("--mode", choices=wc.MODES, default=_env("mode", "symbolic"))
    common.add_argument("--points", type=int, default=_env("points", 20))
    common.add_argument("--seed", type=int, default=_env("seed", 0))
    common.add_argument("--workers", type=_int_list, default=_env("workers", "1"),
                        help="worker processes; bench accepts a comma-separated list")
    common.add_argument("--cache-dir", default=_env("cache_dir"))
    common.add_argument("--format", choices=("json", "table"), default=_env("format", "json"))
    common.add_argument("--k", type=int, default=_env("k"))
    common.add_argument("--p", type=int, default=_env("p"))
    common.add_argument("--twist", choices=("m-e/2", "m+e/2"), default=_env("twist", "m-e/2"),
                        help="twist reading for the tangent-twisted rank-1 product formula")

    parser = argparse.ArgumentParser(prog="nekrasov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command")
    alpha = sub.add_parser("alpha", parents=[common], help="print alpha_n as canonical JSON")
    alpha.add_argument("--beta", action="store_true", help="also print beta_n")
    verify = sub.add_parser("verify", parents=[common], help="run identity checks")
    verify.add_argument("check_name", nargs="?", choices=CHECKS)
    verify.add_argument("--check", choices=CHECKS)
    sub.add_parser("bench", parents=[common], help="time alpha_n per worker count (CSV)")
    return parser


def _config(args) -> RunConfig:
    workers = args.workers if isinstance(args.workers, tuple) else _int_list(args.workers)
    return RunConfig(r=_opt_int(args.r), nf=_opt_int(args.nf), n=_opt_int(args.n),
                     order=_opt_int(args.order), mode=args.mode, points=int(args.points),
                     seed=int(args.seed), workers=workers, cache_dir=args.cache_dir,
                     format=args.format, k=_opt_int(args.k), p=_opt_int(args.p), twist=args.twist)


def _opt_int(v):
    return None if v is None else int(v)


# -- alpha ------------------------------------------------------------------

def alpha_at_points(ctx: Context, n: int, points: int, seed: int, workers: int = 1) -> dict:
    """alpha_n (and beta_n) at ``points`` seeded admissible points."""
    sampler = PointSampler(ctx.nvars, seed)
    flip = ctx.sign_flip(a=True, m=True)
    rows = []
    for _ in range(points):
        def evaluate(p):
            beta_point = [flip[i].evaluate(p.values) if i in flip else v for i, v in enumerate(p.values)]
            return alpha_value(ctx, n, p.values, workers), alpha_value(ctx, n, beta_point, workers)
        p, (a, b) = sampler.admissible(evaluate)
        rows.append({"point": p.to_json(), "alpha": str(a), "beta": str(b)})
    return {"vars": list(ctx.vars), "seed": seed, "samples": rows}


def _alpha_randomized(cfg: RunConfig, ctx: Context, cache: AlphaCache | None) -> dict:
    key = cache_key(ctx, cfg.n, "randomized", points=cfg.points, seed=cfg.seed)
    payload = cache.load(key) if cache else None
    if payload is None:
        payload = alpha_at_points(ctx, cfg.n, cfg.points, cfg.seed, cfg.worker_count)
        if cache:
            cache.store(key, payload)
    return payload


def cmd_alpha(cfg: RunConfig, beta: bool, out) -> int:
    if cfg.n is None:
        raise UsageError("alpha needs --n")
    ctx = cfg.context()
    cache = AlphaCache(cfg.cache_dir) if cfg.cache_dir else None
    if cfg.mode == "randomized":
        payload = _alpha_randomized(cfg, ctx, cache)
        samples = payload["samples"] if beta else [
            {k: v for k, v in row.items() if k != "beta"} for row in payload["samples"]]
        record = {"quantity": "alpha", "r": ctx.r, "nf": ctx.nf, "n": cfg.n,
                  "certificate": {"provenance": "randomized", "seed": cfg.seed, "points": cfg.points,
                                  "range": "p/q with p, q uniform in [-10^6, 10^6] minus 0"},
                  "vars": payload["vars"], "samples": samples}
        out.write(canonical_dumps(record) + "\n")
        return EXIT_OK
    value = cached_alpha(ctx, cfg.n, cache, cfg.worker_count)
    if cfg.format == "table":
        out.write(f"alpha_{cfg.n} = {value.to_str()}\n")
    else:
        out.write(value.to_json() + "\n")
    if beta:
        b = value.substitute(ctx.sign_flip(a=True, m=True))
        out.write((f"beta_{cfg.n} = {b.to_str()}" if cfg.format == "table" else b.to_json()) + "\n")
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def _need(value, flag: str, check: str):
    if value is None:
        raise UsageError(f"verify {check} needs --{flag}")
    return value


def run_check(cfg: RunConfig, check: str) -> list[wc.CheckReport]:
    kw = dict(mode=cfg.mode, points=cfg.points, seed=cfg.seed)
    w = cfg.worker_count
    if check == "main":
        ctx = cfg.context()
        return [wc.verify_main(ctx, n, workers=w, **kw) for n in range(1, _need(cfg.n, "n", check) + 1)]
    if check == "even":
        ctx = cfg.context()
        order = cfg.order if cfg.order is not None else _need(cfg.n, "order", check)
        return [wc.verify_even(ctx, order, workers=w, **kw)]
    if check == "odd":
        ctx = cfg.context()
        if ctx.nf > 2 * ctx.r - 1:
            raise UsageError(f"verify odd needs --nf <= 2r-1 = {2 * ctx.r - 1}")
        order = cfg.order if cfg.order is not None else _need(cfg.n, "order", check)
        return [wc.verify_odd(ctx, order, workers=w, **kw)]
    if check == "reduce":
        ctx = cfg.context()
        if ctx.nf < 1:
            raise UsageError("verify reduce needs --nf >= 1")
        return [wc.verify_reduce(ctx, n, workers=w, **kw) for n in range(_need(cfg.n, "n", check) + 1)]
    if check == "hilbert":
        return [wc.verify_hilbert(_need(cfg.n, "n", check), workers=w, **kw)]
    if check == "residue":
        p = _need(cfg.p, "p", check)
        if p < 1:
            raise UsageError("--p must be at least 1")
        return [wc.verify_residue(p, workers=w)]
    if check == "goal":
        k = _need(cfg.k, "k", check)
        if k < 1:
            raise UsageError("--k must be at least 1")
        return [wc.verify_goal(j, **kw) for j in range(1, k + 1)]
    if check == "counting":
        n = _need(cfg.n, "n", check)
        if n < 1:
            raise UsageError("--n must be at least 1")
        return [wc.verify_counting(n)]
    if check == "rank1":
        order = cfg.order if cfg.order is not None else _need(cfg.n, "order", check)
        return wc.verify_rank1_closed_forms(order, reading=cfg.twist, workers=w, **kw)
    if check == "parity_unit":
        order = cfg.order if cfg.order is not None else _need(cfg.n, "order", check)
        return [wc.verify_parity_unit(Context(_need(cfg.r, "r", check)), order, workers=w, **kw)]
    if check == "symmetry":
        ctx = cfg.context()
        n = _need(cfg.n, "n", check)
        return [wc.verify_flavor_symmetry(ctx, n, workers=w, **kw),
                wc.verify_exchange_symmetry(ctx, n, workers=w, **kw),
                wc.verify_sign_parity(ctx, n, workers=w, **kw)]
    raise UsageError(f"unknown check {check!r}")


def _table_row(rep: wc.CheckReport) -> str:
    params = " ".join(f"{k}={v}" for k, v in rep.params.items())
    return f"{rep.verdict.upper():7} {rep.check:20} {params}  ({rep.duration_s:.3f}s)"


def cmd_verify(cfg: RunConfig, check: str | None, out) -> int:
    if check is None:
        raise UsageError("verify needs a check name (positional or --check)")
    status = EXIT_OK
    for rep in run_check(cfg, check):
        out.write((rep.to_json() if cfg.format == "json" else _table_row(rep)) + "\n")
        out.flush()
        if rep.verdict == "fail":
            status = EXIT_FAIL
    return status


# -- bench ------------------------------------------------------------------

def cmd_bench(cfg: RunConfig, out) -> int:
    if cfg.r is None or cfg.n is None:
        raise UsageError("bench needs --r and --n")
    ctx = cfg.context()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["r", "nf", "n", "mode", "points", "workers", "seconds", "sha256"])
    for workers in cfg.workers:
        start = time.perf_counter()
        if cfg.mode == "symbolic":
            from .localization import localization_sum
            digest = localization_sum(ctx, cfg.n, workers=workers).digest()
            points = ""
        else:
            payload = alpha_at_points(ctx, cfg.n, cfg.points, cfg.seed, workers)
            digest = sha256(canonical_dumps(payload))
            points = cfg.points
        writer.writerow([ctx.r, ctx.nf, cfg.n, cfg.mode, points, workers,
                         f"{time.perf_counter() - start:.3f}", digest])
        out.flush()
    return EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _config(args)
        _validate(cfg)
        if args.command == "alpha":
            return cmd_alpha(cfg, args.beta, out)
        if args.command == "verify":
            return cmd_verify(cfg, args.check or args.check_name, out)
        return cmd_bench(cfg, out)
    except (UsageError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"nekrasov {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheCorruptionError as exc:
        print(f"nekrasov {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InadmissiblePointError, SamplingExhaustedError) as exc:
        print(f"nekrasov {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
