"""Command-line interface.

Subcommands:
  simulate    draw one block-model instance, write tensor + truth labels
  cluster     run a clustering method on a tensor file, write labels
  experiment  Monte-Carlo sweep from a JSON config, write CSV records
  eval        compare predicted labels against truth, print MCR/CER

Exit codes: 0 success, 1 argument/usage error, 2 I/O error.  The
environment variable HETEROCLUST_SEED, when set, overrides the experiment
config's base_seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .clustering import KMeansConfig, hhc, hlloyd, hsc
from .experiment import (config_from_dict, format_summary, run_experiment,
                         summarize, write_csv)
from .io import read_assignments, read_tensor, write_assignments, write_tensor
from .metrics import cer, mcr
from .model import generate_stochastic_tbm, generate_subgaussian_tbm
from .spectral import SpectralConfig

_METHODS = ("hhc", "hsc", "hhc-hlloyd", "hsc-hlloyd")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the CLI contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _add_spectral_flags(p):
    p.add_argument("--tau-mode", choices=("empirical", "theoretical", "fixed"),
                   default="empirical", help="threshold selection rule")
    p.add_argument("--tau-const", type=float, default=1.1,
                   help="threshold constant (default 1.1)")
    p.add_argument("--tau-fixed", type=float, default=0.0,
                   help="threshold value for --tau-mode fixed")
    p.add_argument("--iters", type=int, default=10,
                   help="imputation iterations per deflation round")


def build_parser() -> _Parser:
    parser = _Parser(prog="heteroclust",
                     description="Multiway clustering of 3-way tensor block data")
    sub = parser.add_subparsers(dest="command", metavar="command")

    sim = sub.add_parser("simulate", help="generate one synthetic instance")
    sim.add_argument("--model", choices=("subgaussian", "stochastic"), required=True)
    sim.add_argument("--n", type=int, required=True, help="tensor side length")
    sim.add_argument("--k", type=int, required=True, help="clusters per mode")
    sim.add_argument("--delta", type=float, help="separation exponent (subgaussian)")
    sim.add_argument("--a", type=float, help="probability scale (stochastic)")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--balanced", action="store_true",
                     help="equal cluster sizes instead of uniform labels")
    sim.add_argument("--out-tensor", required=True, metavar="FILE")
    sim.add_argument("--out-truth", required=True, metavar="FILE")

    clu = sub.add_parser("cluster", help="cluster a tensor file")
    clu.add_argument("--method", choices=_METHODS, required=True)
    clu.add_argument("--tensor", required=True, metavar="FILE")
    clu.add_argument("--k", required=True, metavar="K1,K2,K3",
                     help="clusters per mode, comma separated")
    clu.add_argument("--seed", type=int, default=0, help="k-means seed")
    clu.add_argument("--out", required=True, metavar="FILE")
    clu.add_argument("--restarts", type=int, default=10)
    clu.add_argument("--hlloyd-rounds", type=int, default=10)
    _add_spectral_flags(clu)

    exp = sub.add_parser("experiment", help="run a Monte-Carlo sweep")
    exp.add_argument("--config", required=True, metavar="JSON")
    exp.add_argument("--out", required=True, metavar="CSV")
    exp.add_argument("--jobs", type=int, help="override config parallelism")
    exp.add_argument("--timings", action="store_true",
                     help="fill runtime_ms (breaks byte-reproducibility)")
    exp.add_argument("--quiet", action="store_true", help="skip summary output")

    ev = sub.add_parser("eval", help="score predictions against truth")
    ev.add_argument("--pred", required=True, metavar="FILE")
    ev.add_argument("--truth", required=True, metavar="FILE")
    return parser


def _cmd_simulate(args) -> int:
    if args.model == "subgaussian":
        if args.delta is None:
            raise _UsageError("--delta is required for the subgaussian model")
        y, truth = generate_subgaussian_tbm(args.n, args.k, args.delta,
                                            args.seed, args.balanced)
    else:
        if args.a is None:
            raise _UsageError("--a is required for the stochastic model")
        y, truth = generate_stochastic_tbm(args.n, args.k, args.a,
                                           args.seed, args.balanced)
    write_tensor(args.out_tensor, y)
    write_assignments(args.out_truth, truth.assignments)
    print(f"wrote {args.out_tensor} and {args.out_truth}")
    return 0


def _cmd_cluster(args) -> int:
    try:
        ks = tuple(int(v) for v in args.k.split(","))
    except ValueError:
        raise _UsageError(f"--k expects three integers, got {args.k!r}")
    if len(ks) != 3:
        raise _UsageError(f"--k expects three integers, got {args.k!r}")
    y = read_tensor(args.tensor)
    scfg = SpectralConfig(tau_mode=args.tau_mode, tau_const=args.tau_const,
                          tau_fixed=args.tau_fixed, iters_per_round=args.iters)
    kcfg = KMeansConfig(restarts=args.restarts, seed=args.seed)
    base = args.method.split("-")[0]
    result = (hhc if base == "hhc" else hsc)(y, ks, scfg, kcfg)
    assignments = result.assignments
    if args.method.endswith("hlloyd"):
        assignments, _ = hlloyd(y, assignments, args.hlloyd_rounds)
    write_assignments(args.out, assignments)
    print(f"wrote {args.out}")
    return 0


def _cmd_experiment(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _UsageError(f"{args.config}: invalid JSON ({exc})")
    env_seed = os.environ.get("HETEROCLUST_SEED")
    if env_seed is not None:
        doc["base_seed"] = int(env_seed)
    cfg = config_from_dict(doc)
    if args.jobs is not None:
        cfg.jobs = args.jobs
    records = run_experiment(cfg, measure_runtime=args.timings)
    write_csv(records, args.out)
    if not args.quiet:
        print(format_summary(summarize(records)))
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    pred = read_assignments(args.pred)
    truth = read_assignments(args.truth)
    if len(pred) != len(truth):
        raise _UsageError(f"{args.pred} has {len(pred)} assignment blocks, "
                          f"{args.truth} has {len(truth)}")
    mcrs, cers = [], []
    for i, (p, t) in enumerate(zip(pred, truth)):
        m, c = mcr(t, p), cer(t, p)
        mcrs.append(m)
        cers.append(c)
        print(f"mode {i + 1}: mcr={m:.6g} cer={c:.6g}")
    print(f"mean: mcr={sum(mcrs) / len(mcrs):.6g} cer={sum(cers) / len(cers):.6g}")
    print(f"exact: {'yes' if all(m == 0 for m in mcrs) else 'no'}")
    return 0


_COMMANDS = {"simulate": _cmd_simulate, "cluster": _cmd_cluster,
             "experiment": _cmd_experiment, "eval": _cmd_eval}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 1
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        target = getattr(exc, "filename", None)
        print(f"I/O error: {exc}" + (f" ({target})" if target else ""),
              file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
