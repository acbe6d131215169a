"""Command line entry point: ``goodarm {run,convert,verify,params}``.

Every flag with a default can also be set through an environment variable
``GOODARM_<FLAG>`` (upper case, dashes as underscores), e.g.
``GOODARM_DELTA=0.001``.  Explicit flags win over the environment.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import asdict

from .core import ConfigError, save_instance

ENV_PREFIX = "GOODARM_"


def _env(flag: str, default):
    return os.environ.get(ENV_PREFIX + flag.upper().replace("-", "_"), default)


def _affine(text):
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--affine takes four comma-separated numbers a,b,c,d")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="goodarm", description="Good arm identification experiments.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an experiment plan and write result files")
    r.add_argument("--instance", default=_env("instance", None), required=_env("instance", None) is None)
    r.add_argument("--algos", default=_env("algos", "lilhdoc,hdoc,lucbg"))
    r.add_argument("--runs", type=int, default=int(_env("runs", 10)))
    r.add_argument("--delta", type=float, default=float(_env("delta", 0.01)))
    r.add_argument("--seed", type=int, default=int(_env("seed", 0)))
    r.add_argument("--budget", type=int, default=int(float(_env("budget", 5e8))))
    r.add_argument("--workers", type=int, default=int(_env("workers", 1)))
    r.add_argument("--scale", type=float, default=float(_env("scale", 1e5)),
                   help="divisor for the printed summary only")
    r.add_argument("--out", default=_env("out", "results"))

    c = sub.add_parser("convert", help="turn a score file into an instance file")
    c.add_argument("--input", required=True)
    c.add_argument("--column", default=_env("column", "1"))
    c.add_argument("--delimiter", default=_env("delimiter", ","))
    c.add_argument("--skip-header", type=int, default=int(_env("skip_header", 0)))
    c.add_argument("--preset", choices=["covertype", "jester", "movielens"], default=None)
    c.add_argument("--divide-by", type=float, default=None)
    c.add_argument("--affine", type=_affine, default=None)
    c.add_argument("--rank", type=int, default=None)
    c.add_argument("--name", default=None)
    c.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run the numeric verification suites")
    v.add_argument("--suite", action="append", default=None,
                   help="suite name (repeatable or comma-separated); default all")

    pr = sub.add_parser("params", help="print the lil'HDoC parameters for (K, delta)")
    pr.add_argument("--k", type=int, required=True)
    pr.add_argument("--delta", type=float, default=float(_env("delta", 0.01)))
    return p


def cmd_run(args) -> int:
    from .harness import ExperimentPlan, format_summary, run_experiment

    plan = ExperimentPlan(
        instance_path=args.instance,
        algorithms=[a for a in args.algos.split(",") if a.strip()],
        runs=args.runs,
        delta=args.delta,
        seed=args.seed,
        budget=args.budget,
        out_dir=args.out,
        workers=args.workers,
        scale_divisor=args.scale,
    )
    result = run_experiment(plan)
    print(f"instance {plan.instance.name}: K={plan.instance.K}, threshold={plan.instance.threshold}, "
          f"delta={plan.delta}, runs={plan.runs}")
    print(format_summary(result.aggregates), end="")
    for kind, path in result.files.items():
        print(f"{kind}: {path}")
    return 0


def cmd_convert(args) -> int:
    from .ingest import PRESETS, TransformSpec, convert, load_scores

    base = PRESETS[args.preset] if args.preset else TransformSpec()
    spec = TransformSpec(
        divide_by=args.divide_by if args.divide_by is not None else base.divide_by,
        affine=args.affine if args.affine is not None else base.affine,
        threshold_rank=args.rank if args.rank is not None else base.threshold_rank,
    )
    if args.preset is None and args.rank is None:
        raise ConfigError("--rank is required without --preset")
    scores = load_scores(args.input, args.column, args.delimiter, args.skip_header)
    name = args.name or os.path.splitext(os.path.basename(args.input))[0]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = convert(scores, spec, name)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    save_instance(inst, args.out)
    print(f"read {len(scores)} scores; K={inst.K}, threshold={inst.threshold!r}, "
          f"good arms={inst.m}; wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    from .verification import run_suites

    names = [n for s in (args.suite or []) for n in s.split(",") if n]
    checks = run_suites(names)
    for chk in checks:
        print(json.dumps(chk.as_dict(), default=float))
    failed = [c for c in checks if not c.passed]
    print(f"# {len(checks) - len(failed)}/{len(checks)} checks passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_params(args) -> int:
    from .bounds import lil_params

    p = lil_params(args.k, args.delta)
    print("field,value")
    for key, val in asdict(p).items():
        print(f"{key},{val!r}")
    return 0


COMMANDS = {"run": cmd_run, "convert": cmd_convert, "verify": cmd_verify, "params": cmd_params}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
