"""Command-line experiment runner.

Subcommands: train, evaluate, impute, ablate-lambda, sweep, kernel-demo,
decompose, list-experiments.  Recipes come from named presets or a JSON
config file mirroring ExperimentSpec; individual fields are overridden with
repeated --set key=value flags (dotted paths, JSON-parsed values).

Exit codes: 0 success, 2 validation error, 3 numerical divergence,
4 I/O error.  The CAUCHYNET_SEED environment variable overrides the
configured seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import data as dt
from . import experiments as xp
from . import model as mdl
from .errors import (CauchyNetError, NonFiniteError, ParseError, SchemaError,
                     ValidationError)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGED = 3
EXIT_IO = 4


def _parse_set(values):
    out = {}
    for item in values or []:
        if "=" not in item:
            raise ValidationError([f"--set expects key=value, got {item!r}"])
        key, raw = item.split("=", 1)
        try:
            val = json.loads(raw)
        except json.JSONDecodeError:
            val = raw
        out[key.strip()] = val
    return out


def _apply_overrides(doc: dict, overrides: dict) -> dict:
    for key, val in overrides.items():
        parts = key.split(".")
        node = doc
        for p in parts[:-1]:
            if p not in node or not isinstance(node[p], dict):
                raise ValidationError([f"--set {key}: no such config section {p!r}"])
            node = node[p]
        leaf = parts[-1]
        if leaf == "lambda" and "lam" in node:
            leaf = "lam"
        if leaf not in node:
            raise ValidationError([f"--set {key}: unknown field {leaf!r}"])
        node[leaf] = val
    return doc


def load_spec(args) -> xp.ExperimentSpec:
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ParseError(f"cannot read config {args.config}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError([f"config {args.config} is not valid JSON: {exc}"])
    elif args.preset:
        doc = xp.get_preset(args.preset).to_dict()
    else:
        raise ValidationError(["provide --preset or --config"])
    doc = _apply_overrides(doc, _parse_set(args.set))
    spec = xp.ExperimentSpec.from_dict(doc)
    env_seed = os.environ.get("CAUCHYNET_SEED")
    if env_seed is not None:
        spec.train.seed = int(env_seed)
    if getattr(args, "seed", None) is not None:
        spec.train.seed = args.seed
    return spec


def _add_spec_args(p):
    p.add_argument("--preset", help="named experiment recipe")
    p.add_argument("--config", help="JSON config file mirroring ExperimentSpec")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override a config field (dotted path, JSON value)")
    p.add_argument("--seed", type=int, help="override the training seed")
    p.add_argument("--out", default="runs", help="output directory root")
    p.add_argument("--plot", action="store_true",
                   help="also render PNGs when matplotlib is available")


def _outdir(args, spec):
    return Path(args.out) / spec.name


def cmd_train(args):
    spec = load_spec(args)
    report = xp.run_experiment(spec, _outdir(args, spec))
    print(f"{spec.name}: test mse={report.mse:.6g} mae={report.mae:.6g} "
          f"params={report.complex_params} complex / {report.real_params} real")
    if args.plot:
        rendered = xp.render_plots(_outdir(args, spec))
        print("plots: " + (", ".join(rendered) if rendered
                           else "matplotlib unavailable, CSV data only"))
    print(f"artifacts in {_outdir(args, spec)}")
    return EXIT_OK


def cmd_evaluate(args):
    spec = load_spec(args)
    xp.validate_spec(spec)
    model, scaler = mdl.load_checkpoint(args.checkpoint)
    ds = xp.build_dataset(spec)
    if model.m != ds.m:
        raise ValidationError([f"checkpoint input dimension {model.m} does not "
                               f"match dataset dimension {ds.m}"])
    yp_s, _ = mdl.predict(model, ds.test_x)
    yp = dt.scaler_invert(yp_s, scaler)
    print(f"{spec.name}: test mse={xp.metric_mse(yp, ds.test_y):.6g} "
          f"mae={xp.metric_mae(yp, ds.test_y):.6g} (n={len(ds.test_y)})")
    return EXIT_OK


def cmd_impute(args):
    spec = load_spec(args)
    if spec.mask is None:
        raise ValidationError(["impute requires a preset/config with a mask"])
    report = xp.run_experiment(spec, _outdir(args, spec))
    print(f"{spec.name}: hidden-region mse={report.mse:.6g} mae={report.mae:.6g}")
    if args.plot:
        xp.render_plots(_outdir(args, spec))
    print(f"signed errors in {_outdir(args, spec) / 'imputation_errors.csv'}")
    return EXIT_OK


def cmd_ablate_lambda(args):
    spec = load_spec(args)
    lambdas = [float(v) for v in args.lambdas.split(",")] if args.lambdas else None
    rows, summary = xp.run_lambda_ablation(spec, lambdas, _outdir(args, spec))
    print(summary)
    print(f"{len(rows)} rows in {_outdir(args, spec) / 'lambda_ablation.csv'}")
    return EXIT_OK


def _axis(arg, cast):
    return [cast(v) for v in arg.split(",")] if arg else None


def cmd_sweep(args):
    spec = load_spec(args)
    hidden = _axis(args.hidden, int)
    sizes = _axis(args.sizes, int)
    lrs = _axis(args.lrs, float)
    wds = _axis(args.wds, float)
    if args.axes:
        keep = set(args.axes.split(","))
        unknown = keep - {"h", "n", "lr", "wd"}
        if unknown:
            raise ValidationError([f"unknown sweep axes: {sorted(unknown)}"])
        if "h" not in keep and hidden is None:
            hidden = [spec.model.h]
        if "n" not in keep and sizes is None:
            sizes = [spec.n_samples]
        if "lr" not in keep and lrs is None:
            lrs = [spec.train.lr0]
        if "wd" not in keep and wds is None:
            wds = [spec.train.weight_decay]
    rows = xp.run_sensitivity_grid(spec, hidden, sizes, lrs, wds,
                                   outdir=_outdir(args, spec),
                                   threads=args.threads)
    failed = sum(1 for r in rows if r[4] != r[4])
    print(f"{len(rows)} cells ({failed} failed) in "
          f"{_outdir(args, spec) / 'sweep.csv'}")
    return EXIT_OK


def cmd_kernel_demo(args):
    nodes = [int(v) for v in args.nodes.split(",")]
    outdir = Path(args.out) / "kernel-demo"
    rows = xp.run_kernel_demo(target=args.target, a=args.a, b=args.b,
                              center=complex(args.center_re, args.center_im),
                              node_counts=nodes, eval_lo=args.lo,
                              eval_hi=args.hi, grid=args.grid, outdir=outdir)
    for n, err in rows:
        print(f"nodes={n:6d}  sup_error={err:.3e}")
    print(f"table in {outdir / 'kernel_demo.csv'}")
    return EXIT_OK


def cmd_decompose(args):
    series = dt.load_series_csv(args.data, args.column)
    dec = dt.seasonal_decompose_multiplicative(series, args.period)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    import csv as _csv
    with open(out, "w", newline="", encoding="utf-8") as fh:
        w = _csv.writer(fh)
        w.writerow(["t", "value", "trend", "seasonal", "residual"])
        for i, v in enumerate(series):
            w.writerow([i, repr(float(v)), repr(float(dec.trend[i])),
                        repr(float(dec.seasonal[i])), repr(float(dec.residual[i]))])
    print(f"decomposition (period {args.period}) written to {out}")
    return EXIT_OK


def cmd_list_experiments(args):
    for name in sorted(xp.PRESETS):
        print(f"{name:14s} {xp.PRESET_SUMMARIES[name]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cauchynet",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="run a full experiment preset")
    _add_spec_args(p)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a checkpoint on a preset's test split")
    _add_spec_args(p)
    p.add_argument("--checkpoint", required=True)
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("impute", help="run a masked preset and emit signed errors")
    _add_spec_args(p)
    p.set_defaults(fn=cmd_impute)

    p = sub.add_parser("ablate-lambda", help="sweep the imaginary-penalty weight")
    _add_spec_args(p)
    p.add_argument("--lambdas", help="comma-separated values (default: preset set)")
    p.set_defaults(fn=cmd_ablate_lambda)

    p = sub.add_parser("sweep", help="hidden/data/lr/weight-decay sensitivity grid")
    _add_spec_args(p)
    p.add_argument("--axes", help="axes to expand from the preset lists, e.g. h,n")
    p.add_argument("--hidden", help="comma-separated hidden widths")
    p.add_argument("--sizes", help="comma-separated dataset sizes")
    p.add_argument("--lrs", help="comma-separated learning rates")
    p.add_argument("--wds", help="comma-separated weight decays")
    p.add_argument("--threads", type=int, default=1, help="worker pool size")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("kernel-demo", help="contour quadrature convergence table")
    p.add_argument("--target", default="square",
                   choices=sorted(xp.KERNEL_DEMOS))
    p.add_argument("--a", type=float, default=2.0, help="semi-major axis")
    p.add_argument("--b", type=float, default=1.0, help="semi-minor axis")
    p.add_argument("--center-re", type=float, default=0.0)
    p.add_argument("--center-im", type=float, default=0.0)
    p.add_argument("--nodes", default="16,32,64,128")
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--out", default="runs")
    p.set_defaults(fn=cmd_kernel_demo)

    p = sub.add_parser("decompose", help="multiplicative seasonal decomposition of a CSV column")
    p.add_argument("--data", required=True, help="input CSV path")
    p.add_argument("--column", default="y")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--out", default="decomposition.csv")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("list-experiments", help="show available presets")
    p.set_defaults(fn=cmd_list_experiments)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        for problem in exc.problems:
            print(f"error: {problem}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonFiniteError as exc:
        print(f"error: numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (OSError, ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CauchyNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
