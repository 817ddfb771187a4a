"""Command-line entry point: ``cfplab <subcommand> [flags]``.

Exit status is 0 when every report row passes, 1 when some row fails and
2 on configuration or precondition errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..analytic.freeness import circfp_star_moment
from ..analytic.laws import trace_formula
from ..analytic.words import parse_word
from ..ensembles import Seed, write_matrix
from ..errors import CfpError, ConfigError
from .config import ExperimentConfig, load_config, run_config, with_overrides
from .experiments import Tolerance
from .models import ENSEMBLES, Ensemble
from .report import summary_table, write_report

EXPERIMENT_COMMANDS = ("moment", "fpinv", "dyson", "decouple", "freeness", "blockmodel", "annulus")


def _shared() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int, nargs="+", help="matrix size(s)")
    p.add_argument("--c", type=float, help="free Poisson parameter (>= 1)")
    p.add_argument("--r", type=float, nargs="+", help="cut radius/radii")
    p.add_argument("--N", type=int, help="block count for the block model")
    p.add_argument("--word", action="append", help="word such as 'y* y' (repeatable)")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--tol", type=float, help="stderr multiplier for statistical rows")
    p.add_argument("--abs-tol", type=float, help="absolute tolerance (projector-rank rows)")
    p.add_argument("--rel-tol", type=float, help="relative tolerance")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfplab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _shared()

    sp = sub.add_parser("sample", parents=[shared], help="draw one matrix and write it to --out")
    sp.add_argument("--ensemble", choices=ENSEMBLES, default="induced-ginibre")

    for name in EXPERIMENT_COMMANDS:
        sub.add_parser(name, parents=[shared], help=f"run the {name} experiment")

    sub.add_parser("oracle", parents=[shared], help="print analytic *-moments and trace-formula values")
    sub.add_parser("report", parents=[shared], help="run the experiment named in --config")
    return parser


def _tolerance(args, base: Tolerance) -> Tolerance:
    return Tolerance(
        multiplier=base.multiplier if args.tol is None else args.tol,
        absolute=base.absolute if args.abs_tol is None else args.abs_tol,
        relative=base.relative if args.rel_tol is None else args.rel_tol,
    )


def config_from_args(args, experiment: str) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
        if experiment != "report" and cfg.experiment != experiment:
            raise ConfigError(f"config is for {cfg.experiment!r}, not {experiment!r}", "experiment-name")
    elif experiment == "report":
        raise ConfigError("report needs --config")
    else:
        cfg = ExperimentConfig(experiment)
    return with_overrides(
        cfg,
        n=None if args.n is None else tuple(args.n),
        c=args.c,
        r=None if args.r is None else tuple(args.r),
        N=args.N,
        words=None if args.word is None else tuple(args.word),
        trials=args.trials,
        seed=args.seed,
        threads=args.threads,
        output=args.out,
        format=args.format,
        tolerance=_tolerance(args, cfg.tolerance),
    )


def run_report(cfg: ExperimentConfig, stream=None) -> int:
    """Run ``cfg``, write its report file and print a summary; return the exit status."""
    stream = stream or sys.stdout
    rows = run_config(cfg)
    out = cfg.output or f"{cfg.experiment}-report.{cfg.format}"
    path = write_report(rows, out, cfg.format)
    print(summary_table(rows), file=stream)
    print(f"report written to {path}", file=stream)
    return 0 if all(r.passed for r in rows) else 1


def _cmd_sample(args) -> int:
    if not args.out:
        raise ConfigError("sample needs --out", "out")
    n = (args.n or [200])[0]
    ens = Ensemble(args.ensemble, c=args.c or 1.0, N=args.N or 1)
    ens.validate(n)
    m = ens.sample(n, Seed(args.seed or 0))
    write_matrix(args.out, m)
    print(f"wrote {m.shape[0]}x{m.shape[1]} {args.ensemble} matrix to {args.out}")
    return 0


def _cmd_oracle(args) -> int:
    c = args.c or 1.0
    words = args.word or []
    lines = ["word,value_re,value_im"]
    for w in words:
        v = circfp_star_moment(c, parse_word(w))
        lines.append(f"{w},{v.real!r},{v.imag!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if words:
        print(text, end="")
    for r in args.r or []:
        print(f"trace_formula(c={c:g}, r={r:g}) = {trace_formula(c, r)!r}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "sample":
            return _cmd_sample(args)
        if args.command == "oracle":
            return _cmd_oracle(args)
        return run_report(config_from_args(args, args.command))
    except CfpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
