"""Command line entry point.

Exit status: 0 on success, 1 when a run fails, 2 on configuration errors,
3 when an enabled bound check is violated.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys

from .config import ConfigError, load_config, parse_prior
from .experiment import run_experiment, write_outputs
from .priors import advance, posterior_lower_bound, posterior_p, reset_after_observation

log = logging.getLogger("faultoco")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BOUND = 0, 1, 2, 3


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="experiment YAML file")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--trials", type=int, help="number of trials (overrides config)")
    p.add_argument("--rounds", type=int, help="rounds T per trial (overrides config)")
    p.add_argument("--variants", help="comma-separated variant names (overrides config)")
    p.add_argument("--jobs", type=int, help="worker processes for trials")


def _parse_component(text: str) -> dict:
    """``beta:A,B[,W]`` or ``mass:P[,W]``."""
    kind, _, rest = text.partition(":")
    vals = [float(v) for v in rest.split(",") if v]
    if kind == "beta" and len(vals) in (2, 3):
        return {"kind": "beta", "alpha": vals[0], "beta": vals[1], "weight": vals[2] if len(vals) == 3 else None}
    if kind == "mass" and len(vals) in (1, 2):
        return {"kind": "mass", "p": vals[0], "weight": vals[1] if len(vals) == 2 else None}
    raise argparse.ArgumentTypeError(f"bad component {text!r}; use beta:A,B[,W] or mass:P[,W]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faultoco", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, kind in (
        ("run", None),
        ("run-synthetic", "synthetic"),
        ("run-regression", "regression"),
        ("run-classification", "classification"),
    ):
        p = sub.add_parser(name, help=f"run a {kind or 'configured'} experiment")
        _add_run_flags(p)
        p.set_defaults(kind=kind)
    p = sub.add_parser("validate-config", help="parse and validate a config file")
    p.add_argument("--config", required=True)
    p = sub.add_parser("estimate-prior-demo", help="posterior observation probability vs gap, as CSV")
    p.add_argument("--config", help="take the prior block from this config")
    p.add_argument("--component", action="append", type=_parse_component, default=[],
                   help="prior component beta:A,B[,W] or mass:P[,W]; weights default to equal shares")
    p.add_argument("--gaps", type=int, default=10, help="largest gap term d to tabulate")
    p.add_argument("--out", help="CSV path (default stdout)")
    return parser


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "kind", None) and cfg.experiment != args.kind:
        raise ConfigError("experiment", f"expected {args.kind!r} for {args.command}, got {cfg.experiment!r}")
    variants = None
    if getattr(args, "variants", None):
        from .estimators import canonical_variant
        try:
            variants = tuple(dict.fromkeys(canonical_variant(v) for v in args.variants.split(",")))
        except ValueError as exc:
            raise ConfigError("variants", str(exc)) from None
    return cfg.with_overrides(
        seed=getattr(args, "seed", None), out_dir=getattr(args, "out", None),
        trials=getattr(args, "trials", None), rounds=getattr(args, "rounds", None),
        variants=variants, jobs=getattr(args, "jobs", None),
    )


def cmd_run(args) -> int:
    cfg = _load(args)
    result = run_experiment(cfg)
    out = write_outputs(cfg, result)
    log.info("wrote %s", out)
    if result.summary is not None:
        for name, s in result.summary.variants.items():
            print(f"{name:28s} mean={s.mean:.6g} sd={s.sd:.6g} trials={s.trials} rounds={s.rounds}")
    for v in result.violations:
        print(f"bound violated: {v}", file=sys.stderr)
    return EXIT_BOUND if result.violations else EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    print(f"ok: {cfg.experiment} experiment, {len(cfg.variants)} variants, {cfg.trials} trials")
    return EXIT_OK


def cmd_prior_demo(args) -> int:
    if args.config:
        prior = load_config(args.config).prior
    else:
        comps = args.component or [{"kind": "beta", "alpha": 1.0, "beta": 1.0, "weight": None}]
        n = len(comps)
        for c in comps:
            if c["weight"] is None:
                c["weight"] = 1.0 / n
        prior = parse_prior(comps, "--component")
    if args.gaps < 1:
        raise ConfigError("--gaps", "must be >= 1")
    state = reset_after_observation(prior)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gap", "p_t", "lower_bound"])
        for d in range(1, args.gaps + 1):
            if d > 1:
                advance(state)
            w.writerow([d, repr(posterior_p(prior, state)), repr(posterior_lower_bound(prior, state))])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handler = {"validate-config": cmd_validate, "estimate-prior-demo": cmd_prior_demo}.get(args.command, cmd_run)
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError, ArithmeticError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
