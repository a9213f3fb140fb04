"""``bench`` command line entry point."""

from __future__ import annotations

import argparse
import sys
import time

from .array_model import ConfigurationError
from .harness import (bound_sweep_specs, emit_plot, load_config, parse_config, run_experiment,
                      write_csv)


def _add_common(p):
    p.add_argument("--config", help="flat 'section.key = value' config file")
    p.add_argument("--runs", type=int, help="Monte Carlo runs K")
    p.add_argument("--snapshots", type=int, help="snapshots per run N")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--rank", type=int, help="JIO rank r")
    p.add_argument("--workers", type=int, help="worker processes")
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--plot", help="SVG plot output path")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override any config key, e.g. --set bound.alpha=22")


def _overrides(args) -> dict[str, str]:
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigurationError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    flag_keys = {"runs": "run.runs", "snapshots": "run.snapshots", "seed": "run.seed",
                 "rank": "jio.rank", "workers": "run.workers", "csv": "output.csv",
                 "plot": "output.plot", "algo": "run.algorithms"}
    for attr, key in flag_keys.items():
        val = getattr(args, attr, None)
        if val is not None:
            out[key] = str(val)
    return out


def _config(args):
    if args.config:
        return load_config(args.config, _overrides(args))
    return parse_config("", _overrides(args))


def _report(result, elapsed, out=None):
    out = out or sys.stdout
    db = result.mean_sinr_db
    n = result.snapshots
    marks = sorted({k for k in (1, n // 10, n // 4, n // 2, n) if k >= 1})
    width = max(len(lab) for lab in result.labels)
    head = " ".join(f"{'@' + str(k):>9}" for k in marks)
    print(f"{'algorithm':<{width}} {head} {'updates':>8}", file=out)
    for j, lab in enumerate(result.labels):
        cells = " ".join(f"{db[j, k - 1]:9.2f}" for k in marks)
        print(f"{lab:<{width}} {cells} {result.cum_update_fraction[j, -1]:8.3f}", file=out)
    print(f"mean SINR in dB over {result.runs} runs; {elapsed:.1f}s", file=out)


def _finish(cfg, result, started):
    _report(result, time.time() - started)
    if cfg.csv:
        write_csv(result, cfg.csv)
        print(f"wrote {cfg.csv}")
    if cfg.plot:
        emit_plot(result, cfg.plot)
        print(f"wrote {cfg.plot}")


def cmd_run(args):
    cfg = _config(args)
    started = time.time()
    _finish(cfg, run_experiment(cfg), started)


def cmd_sweep(args):
    deltas = [float(d) for d in args.deltas.split(",") if d.strip()]
    if not deltas:
        raise ConfigurationError("--deltas needs at least one value")
    cfg = _config(args)
    cfg = cfg.replace(algorithms=(), extra=bound_sweep_specs(deltas, args.family))
    started = time.time()
    _finish(cfg, run_experiment(cfg), started)


def build_parser():
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="SINR convergence experiment")
    _add_common(run)
    run.add_argument("--algo", help="comma list: jio-sm-sg,jio-sg,fr-sg,fr-sm-sg,oracle")
    run.set_defaults(func=cmd_run)
    sweep = sub.add_parser("sweep-bound", help="fixed versus time-varying bound study")
    _add_common(sweep)
    sweep.add_argument("--deltas", default="0.7,1.0,1.5", help="fixed bounds to compare")
    sweep.add_argument("--family", default="fr", choices=("fr", "jio", "both"))
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigurationError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
