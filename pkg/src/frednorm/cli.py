"""Command-line entry point: synth, stability, train, eval, verify, ablate."""
import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from .data import write_csv
from .pipeline import (Config, ablation_filters, evaluate, load_run, load_series, prepare,
                       save_run, train)
from .stability import measure_windows, save_measure
from .theory import verify_series

RUN_DIR_ENV = "FREDNORM_RUN_DIR"


def _config(path, overrides):
    d = {}
    if path:
        with open(path) as fh:
            d = json.load(fh)
    for item in overrides or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"--set expects key=value, got {item!r}")
        try:
            d[key] = json.loads(value)
        except json.JSONDecodeError:
            d[key] = value
    return Config.from_dict(d)


def cmd_synth(args):
    cfg = _config(args.spec, args.set)
    write_csv(args.out, load_series(cfg.replace(data="")))
    print(args.out)


def cmd_stability(args):
    cfg = _config(args.config, args.set)
    splits = prepare(cfg, load_series(cfg, args.data))
    measure = measure_windows(splits.train.inputs, cfg.epsilon)
    save_measure(measure, args.out)
    plot = args.plot_out or os.path.splitext(args.out)[0] + ".plot.csv"
    with open(plot, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "channel", "mean", "std", "score"])
        for k in range(measure.n_freqs):
            for c in range(measure.n_channels):
                w.writerow([k, c, repr(float(measure.mean[k, c])), repr(float(measure.std[k, c])),
                            repr(float(measure.scores[k, c]))])
    print(json.dumps({"measure": args.out, "plot": plot, "windows": measure.count}))


def cmd_train(args):
    cfg = _config(args.config, args.set)
    if args.data:
        cfg = cfg.replace(data=args.data)
    out = args.out or os.environ.get(RUN_DIR_ENV) or os.path.join("runs", "latest")
    model, splits, metrics = train(cfg)
    save_run(out, cfg, model, splits, metrics)
    print(json.dumps({"run_dir": out, "test": metrics.get("test")}))


def cmd_eval(args):
    run_dir = args.checkpoint or os.environ.get(RUN_DIR_ENV) or os.path.join("runs", "latest")
    cfg, model = load_run(run_dir)
    splits = prepare(cfg, load_series(cfg, args.data))
    print(json.dumps(evaluate(model, splits.test)))


def cmd_verify(args):
    series = load_series(Config(), args.data)
    failed = total = 0
    for rep in verify_series(series, args.lookback, args.stride, seed=args.seed):
        if "passed" in rep:
            total += 1
            failed += not rep["passed"]
        if not args.quiet:
            print(json.dumps(rep))
    print(json.dumps({"checks": total, "failed": failed}), file=sys.stderr)
    return 1 if failed else 0


def format_table(rows):
    lines = ["| filter | median MSE | median MAE | per-seed MSE |", "|---|---|---|---|"]
    for name, r in rows.items():
        seeds = ", ".join(f"{v:.4f}" for v in r["mse"])
        lines.append(f"| {name} | {np.median(r['mse']):.4f} | {np.median(r['mae']):.4f} | {seeds} |")
    return "\n".join(lines)


def run_ablation(cfg, seeds):
    rows = {}
    for seed in seeds:
        run_cfg = cfg.replace(seed=seed, synth_seed=seed)
        series = load_series(run_cfg)
        for name, spec in ablation_filters(run_cfg, seed).items():
            test = train(run_cfg.replace(filter=spec), series)[2]["test"]
            r = rows.setdefault(name, {"filter": [], "mse": [], "mae": []})
            r["filter"].append(spec)
            r["mse"].append(test["mse"])
            r["mae"].append(test["mae"])
    return rows


def cmd_ablate(args):
    cfg = _config(args.config, args.set)
    rows = run_ablation(cfg, args.seeds)
    table = format_table(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table + "\n")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"config": cfg.to_dict(), "seeds": args.seeds, "results": rows}, fh, indent=2)
    print(table)


def build_parser():
    p = argparse.ArgumentParser(prog="frednorm", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp, flag="--config"):
        sp.add_argument(flag, help="flat JSON config file")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one config key (value parsed as JSON)")

    sp = sub.add_parser("synth", help="write a synthetic series")
    with_config(sp, "--spec")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("stability", help="stability measure over the training windows")
    sp.add_argument("--data")
    with_config(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--plot-out", help="per-bin mean/std/score CSV (default: <out>.plot.csv)")
    sp.set_defaults(func=cmd_stability)

    sp = sub.add_parser("train", help="train and write a run directory")
    with_config(sp)
    sp.add_argument("--data", help="CSV overriding the config's data source")
    sp.add_argument("--out", help=f"run directory (default: ${RUN_DIR_ENV} or runs/latest)")
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("eval", help="test-split MSE/MAE of a run directory")
    sp.add_argument("--checkpoint", help="run directory written by 'train'")
    sp.add_argument("--data", help="CSV (default: the run's own data source)")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", help="lemma/theorem identity checks on a CSV series")
    sp.add_argument("--data", required=True)
    sp.add_argument("--lookback", type=int, default=96)
    sp.add_argument("--stride", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-q", "--quiet", action="store_true", help="only print the summary")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("ablate", help="compare stability weighting, low-pass and random filters")
    with_config(sp)
    sp.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4])
    sp.add_argument("--out", help="markdown table path")
    sp.add_argument("--json", help="machine-readable results path")
    sp.set_defaults(func=cmd_ablate)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args) or 0
    except Exception as err:  # noqa: BLE001 - report and exit 1
        print(f"frednorm {args.command}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
