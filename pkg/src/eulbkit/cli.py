"""Command-line entry point: ``eulbkit {compute,sweep,optimize,reproduce}``.

Exit codes: 0 success, 2 configuration error, 3 degenerate filter,
4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, load_config
from .entropy import eulb, uncertainty_lhs
from .optimize import baseline, evolve, sweep_m
from .presets import figure_ids
from .protocol import FilterAnnihilationError, FilterParams, run_pipeline
from .reproduce import dump_json, format_summary, reproduce_figure, run_record, write_sweep_csv

EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_IO = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _finite(doc: dict) -> dict:
    for k, v in doc.items():
        if isinstance(v, float) and not math.isfinite(v):
            raise CliError(f"non-finite value for {k}", EXIT_DEGENERATE)
    return doc


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from None


def cmd_compute(args) -> int:
    cfg = load_config(args.config)
    sc = cfg.scenario()
    try:
        f = FilterParams(args.m, 1.0, args.n1, args.n2)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    try:
        rep = run_pipeline(sc.rho0, f, sc.ch_a, sc.ch_b)
    except FilterAnnihilationError as exc:
        raise CliError(str(exc), EXIT_DEGENERATE) from None
    rho = rep.state_after_reversal
    doc = {
        "baseline": baseline(sc),
        "eulb": eulb(rho, sc.obs),
        "lhs_uncertainty": uncertainty_lhs(rho, sc.obs),
        "m": args.m,
        "n1": args.n1,
        "n2": args.n2,
        "reversal_success_prob": rep.reversal_success_prob,
        "state_purity": float(np.trace(rho @ rho).real),
        "weak_success_prob": rep.weak_success_prob,
    }
    sys.stdout.write(dump_json(_finite(doc)))
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    space = cfg.search_space()
    m_min = space.m_range[0] if args.m_min is None else args.m_min
    m_max = space.m_range[1] if args.m_max is None else args.m_max
    if args.m_steps < 2:
        raise CliError("--m-steps must be >= 2", EXIT_CONFIG)
    try:
        points, base = sweep_m(
            cfg.scenario(), space, np.linspace(m_min, m_max, args.m_steps), cfg.optimizer(args.seed)
        )
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from None
    for pt in points:
        _finite({"eulb": pt.eulb})
    try:
        write_sweep_csv(args.out, points, base)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from None
    return 0


def cmd_optimize(args) -> int:
    cfg = load_config(args.config)
    opt = cfg.optimizer(args.seed)
    result = evolve(cfg.scenario(), cfg.search_space(), opt)
    doc = _finite({**result.as_dict(), **run_record("optimize", cfg, opt.seed)})
    text = dump_json(doc)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_reproduce(args) -> int:
    ids = figure_ids()
    if args.figure not in ids:
        raise CliError(f"unknown figure {args.figure!r}; valid ids: {', '.join(ids)}", EXIT_CONFIG)
    try:
        summaries = reproduce_figure(args.figure, args.out, m_steps=args.m_steps, seed=args.seed)
    except OSError as exc:
        raise CliError(f"cannot write to {args.out}: {exc}", EXIT_IO) from None
    for s in summaries:
        print(format_summary(s))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulbkit",
        description="Weak measurement / decoherence / reversal and the entropic uncertainty lower bound.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one filter setting")
    p.add_argument("--config", required=True)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--n1", type=float, default=1.0)
    p.add_argument("--n2", type=float, default=1.0)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("sweep", help="constrained minimum over (n1, n2) along an m grid, as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--m-min", type=float)
    p.add_argument("--m-max", type=float)
    p.add_argument("--m-steps", type=int, default=31)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="genetic search over (m, n1, n2)")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reproduce", help="rerun a published figure and compare")
    p.add_argument("--figure", required=True, metavar="ID")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--m-steps", type=int, default=31)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", None) is not None and args.seed < 0:
        print("error: --seed must be non-negative", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
