"""Experiment specs, presets, metrics, and the run/ablation/sweep harness.

Every preset is a complete declarative recipe (generator, mask, model
config, training schedule, scaler range).  A run emits reproducible
artifacts into its output directory: trainlog.csv, predictions.csv,
metrics.csv, checkpoint.json, and a manifest.json listing every file with
a content hash.  With a fixed seed everything except wall-clock timings is
byte-identical across reruns; timings live only in metrics.csv and the
manifest, which the manifest marks as nondeterministic.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import baseline as bl
from . import data as dt
from . import grad, kernel, model as mdl
from .complex_linalg import Rng, derive_seed
from .errors import (LengthMismatch, NonFiniteError, ValidationError)
from .optim import TrainConfig, train

CONFIG_VERSION = 1

# Seed-stream tags (keep sampling, splitting, and inits decorrelated).
_STREAM_SAMPLES = 11
_STREAM_SPLIT = 12
_STREAM_INIT = 13
_STREAM_BASELINE_INIT = 14


# ---------------------------------------------------------------------------
# Metrics


def metric_mse(preds, truths) -> float:
    p = np.asarray(preds, dtype=float)
    t = np.asarray(truths, dtype=float)
    if p.shape != t.shape or p.size == 0:
        raise LengthMismatch("predictions and truths must be nonempty and equal-length")
    return float(((p - t) ** 2).mean())


def metric_mae(preds, truths) -> float:
    p = np.asarray(preds, dtype=float)
    t = np.asarray(truths, dtype=float)
    if p.shape != t.shape or p.size == 0:
        raise LengthMismatch("predictions and truths must be nonempty and equal-length")
    return float(np.abs(p - t).mean())


@dataclass
class MetricsReport:
    mse: float
    mae: float
    abs_errors: np.ndarray
    complex_params: int
    real_params: int
    wall_ms: float

    def __post_init__(self):
        # mae^2 <= mse by Cauchy-Schwarz; a violation means a metrics bug.
        assert self.mae ** 2 <= self.mse * (1 + 1e-12), "mae^2 exceeded mse"


# ---------------------------------------------------------------------------
# Experiment specification


@dataclass
class ModelSpec:
    h: int = 128
    epsilon: float = 1e-8
    init: str = "elliptical"       # "elliptical" or "xavier"
    init_major: float = 6.0        # pole-ellipse semi-axes (input units)
    init_minor: float = 2.0


@dataclass
class ExperimentSpec:
    name: str
    generator: str
    n_samples: int = 300
    fractions: tuple = (0.5, 0.25, 0.25)
    mask: dict | None = None               # {"kind": "intervals"|"disk", ...}
    masked_fractions: tuple = (0.75, 0.25)  # train/val share of visible points
    model: ModelSpec = field(default_factory=ModelSpec)
    train: TrainConfig = field(default_factory=TrainConfig)
    scaler_range: tuple = (0.0, 1.0)
    baseline: bool = False                 # also train the ReLU MLP
    baseline_lr: float | None = None
    data_path: str | None = None           # csv-trend generator only
    data_column: str = "y"
    period: int = 12
    lambdas: tuple = (0.1, 0.3, 0.5, 1.0, 1.5)
    grid_hidden: tuple = (32, 64, 128, 256, 612, 1224)
    grid_sizes: tuple = (100, 300, 600, 1200)
    grid_lrs: tuple = (0.001, 0.01, 0.1)
    grid_wds: tuple = (0.0, 1e-5, 1e-4)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["config_version"] = CONFIG_VERSION
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentSpec":
        doc = copy.deepcopy(doc)
        version = doc.pop("config_version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise ValidationError([f"unsupported config_version {version!r}"])
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValidationError([f"unknown config fields: {sorted(unknown)}"])
        if "model" in doc and isinstance(doc["model"], dict):
            doc["model"] = ModelSpec(**doc["model"])
        if "train" in doc and isinstance(doc["train"], dict):
            tr = dict(doc["train"])
            if "lambda" in tr:          # accepted alias for lam
                tr["lam"] = tr.pop("lambda")
            doc["train"] = TrainConfig(**tr)
        for key in ("fractions", "masked_fractions", "scaler_range", "lambdas",
                    "grid_hidden", "grid_sizes", "grid_lrs", "grid_wds"):
            if key in doc and isinstance(doc[key], list):
                doc[key] = tuple(doc[key])
        return cls(**doc)


def validate_spec(spec: ExperimentSpec) -> None:
    """Collect every precondition violation; raise before any compute."""
    problems = []
    if spec.generator not in GENERATORS:
        problems.append(f"unknown generator {spec.generator!r}; "
                        f"known: {sorted(GENERATORS)}")
    if spec.n_samples < 10:
        problems.append("n_samples must be at least 10")
    fr = spec.fractions
    if len(fr) != 3 or any(f < 0 for f in fr) or not 0.999 <= sum(fr) <= 1.0001:
        problems.append("fractions must be three nonnegative values summing to 1")
    if spec.mask is not None:
        kind = spec.mask.get("kind")
        if kind == "intervals":
            if spec.mask.get("half_width", 0) <= 0:
                problems.append("interval mask needs half_width > 0")
        elif kind == "disk":
            if spec.mask.get("radius", 0) <= 0:
                problems.append("disk mask needs radius > 0")
        else:
            problems.append(f"unknown mask kind {kind!r}")
        mf = spec.masked_fractions
        if len(mf) != 2 or any(f <= 0 for f in mf) or not 0.999 <= sum(mf) <= 1.0001:
            problems.append("masked_fractions must be two positive values summing to 1")
    if spec.model.h < 1:
        problems.append("model.h must be at least 1")
    if spec.model.epsilon < 0:
        problems.append("model.epsilon must be nonnegative")
    if spec.model.init not in ("elliptical", "xavier"):
        problems.append(f"unknown init strategy {spec.model.init!r}")
    if spec.model.init == "elliptical" and (spec.model.init_major <= 0
                                            or spec.model.init_minor <= 0):
        problems.append("elliptical init needs positive semi-axes")
    problems.extend(spec.train.validate())
    if spec.scaler_range[1] <= spec.scaler_range[0]:
        problems.append("scaler_range must be increasing")
    if spec.generator == "csv-trend":
        if not spec.data_path:
            problems.append("csv-trend requires data_path")
        if spec.period < 2:
            problems.append("period must be at least 2")
    if problems:
        raise ValidationError(problems)


# ---------------------------------------------------------------------------
# Dataset generators


def _gen_even_1d(lo, hi, target):
    def build(spec: ExperimentSpec, rng: Rng):
        xs = np.linspace(lo, hi, spec.n_samples)
        return xs[:, None], target(xs)
    return build


def _gen_random_2d(lo, hi, target):
    def build(spec: ExperimentSpec, rng: Rng):
        pts = np.array([[rng.uniform_in(lo, hi), rng.uniform_in(lo, hi)]
                        for _ in range(spec.n_samples)])
        return pts, target(pts[:, 0], pts[:, 1])
    return build


def _gen_csv_trend(spec: ExperimentSpec, rng: Rng):
    series = dt.load_series_csv(spec.data_path, spec.data_column)
    dec = dt.seasonal_decompose_multiplicative(series, spec.period)
    ok = np.isfinite(dec.trend)
    trend = dec.trend[ok]
    t = np.linspace(-1.0, 1.0, len(trend))
    return t[:, None], trend


GENERATORS = {
    "intro-spike": _gen_even_1d(-1.0, 1.0, dt.target_intro_spike),
    "exp1": _gen_even_1d(-1.0, 1.0, dt.target_exp1),
    "exp2-gap": _gen_even_1d(-2.0, 2.0, dt.target_exp2_gap),
    "disk2d": _gen_random_2d(-0.8, 0.8, dt.target_2d_missing_disk),
    "surface2d": _gen_random_2d(-1.5, 1.5, dt.target_2d_surface),
    "csv-trend": _gen_csv_trend,
}

_GENERATOR_DOMAINS = {
    "intro-spike": (-1.0, 1.0), "exp1": (-1.0, 1.0), "exp2-gap": (-2.0, 2.0),
    "disk2d": (-0.8, 0.8), "surface2d": (-1.5, 1.5), "csv-trend": (-1.0, 1.0),
}

_GENERATOR_TARGETS_1D = {
    "intro-spike": dt.target_intro_spike,
    "exp1": dt.target_exp1,
    "exp2-gap": dt.target_exp2_gap,
}


def resolve_mask(spec: ExperimentSpec) -> dt.MissingMask | None:
    """Materialize the experiment's mask; interval centers may be computed
    from the generator's turning points."""
    if spec.mask is None:
        return None
    kind = spec.mask["kind"]
    if kind == "intervals":
        centers = spec.mask.get("centers", "turning-points")
        if centers == "turning-points":
            lo, hi = _GENERATOR_DOMAINS[spec.generator]
            centers = dt.find_turning_points(
                _GENERATOR_TARGETS_1D[spec.generator], lo, hi)
        return dt.MissingMask(kind="intervals", centers=list(centers),
                              half_width=spec.mask["half_width"])
    return dt.MissingMask(kind="disk",
                          center=tuple(spec.mask.get("center", (0.0, 0.0))),
                          radius=spec.mask["radius"])


def build_dataset(spec: ExperimentSpec) -> dt.SplitDataset:
    """Sample the generator and split; masked regions become the test set."""
    sample_rng = Rng(derive_seed(spec.train.seed, _STREAM_SAMPLES))
    X, y = GENERATORS[spec.generator](spec, sample_rng)
    split_rng = Rng(derive_seed(spec.train.seed, _STREAM_SPLIT))
    mask = resolve_mask(spec)
    if mask is None:
        return dt.make_split(X, y, spec.fractions, split_rng,
                             provenance=spec.generator)
    (vis_x, vis_y), (hid_x, hid_y) = dt.apply_mask(X, y, mask)
    if len(hid_y) == 0:
        raise ValidationError(["mask hides no samples"])
    if len(vis_y) < 2:
        raise ValidationError(["mask leaves too few visible samples"])
    idx = split_rng.permutation(len(vis_y))
    cut = int(math.floor(spec.masked_fractions[0] * len(vis_y)))
    tr, va = idx[:cut], idx[cut:]
    return dt.SplitDataset(vis_x[tr], vis_y[tr], vis_x[va], vis_y[va],
                           hid_x, hid_y, m=X.shape[1],
                           provenance=f"{spec.generator}+mask")


def _init_model(spec: ExperimentSpec, m: int, seed_tag: int):
    rng = Rng(derive_seed(spec.train.seed, seed_tag))
    ms = spec.model
    if ms.init == "elliptical":
        return mdl.init_elliptical(ms.h, m, rng, semi_major=ms.init_major,
                                   semi_minor=ms.init_minor, epsilon=ms.epsilon)
    return mdl.init_xavier_complex(ms.h, m, rng, epsilon=ms.epsilon)


# ---------------------------------------------------------------------------
# Run harness


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_predictions(path, ds, scaler, predict_fn):
    """split,x0[,x1],y_true,y_pred,e_pred,abs_err over all three splits.

    y columns are in unscaled target units; e_pred stays in scaled output
    units (the imaginary channel has no unscaled counterpart).
    """
    import csv as _csv
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _csv.writer(fh)
        xcols = [f"x{i}" for i in range(ds.m)]
        w.writerow(["split"] + xcols + ["y_true", "y_pred", "e_pred", "abs_err"])
        for name, X, y in (("train", ds.train_x, ds.train_y),
                           ("val", ds.val_x, ds.val_y),
                           ("test", ds.test_x, ds.test_y)):
            yp_s, ep = predict_fn(X)
            yp = dt.scaler_invert(yp_s, scaler)
            for xi, yt, ypi, epi in zip(X, y, yp, ep):
                w.writerow([name] + [repr(float(v)) for v in xi]
                           + [repr(float(yt)), repr(float(ypi)),
                              repr(float(epi)), repr(abs(float(ypi - yt)))])


def _split_metrics(ds, scaler, predict_fn):
    out = {}
    for name, X, y in (("train", ds.train_x, ds.train_y),
                       ("val", ds.val_x, ds.val_y),
                       ("test", ds.test_x, ds.test_y)):
        yp_s, _ = predict_fn(X)
        yp = dt.scaler_invert(yp_s, scaler)
        out[name] = (metric_mse(yp, y), metric_mae(yp, y), len(y))
    return out


def render_plots(outdir: Path) -> list[str]:
    """Render loss-curve and prediction PNGs from a run's CSV artifacts.

    Plot data is always the CSVs; rendering is best-effort and returns the
    files written (empty when matplotlib is unavailable).
    """
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return []
    import csv as _csv
    written = []
    trainlog = outdir / "trainlog.csv"
    if trainlog.exists():
        with open(trainlog, newline="", encoding="utf-8") as fh:
            rows = list(_csv.DictReader(fh))
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.semilogy([int(r["epoch"]) for r in rows],
                    [float(r["train_loss"]) for r in rows], label="train")
        ax.semilogy([int(r["epoch"]) for r in rows],
                    [float(r["val_loss"]) for r in rows], label="val")
        ax.set_xlabel("epoch")
        ax.set_ylabel("loss")
        ax.legend()
        fig.tight_layout()
        fig.savefig(outdir / "loss_curves.png", dpi=120)
        plt.close(fig)
        written.append("loss_curves.png")
    preds = outdir / "predictions.csv"
    if preds.exists():
        with open(preds, newline="", encoding="utf-8") as fh:
            rows = list(_csv.DictReader(fh))
        if rows and "x1" not in rows[0]:
            pts = sorted((float(r["x0"]), float(r["y_true"]), float(r["y_pred"]))
                         for r in rows)
            xs = [p[0] for p in pts]
            fig, ax = plt.subplots(figsize=(6, 4))
            ax.plot(xs, [p[1] for p in pts], "k--", label="target")
            ax.plot(xs, [p[2] for p in pts], label="prediction")
            ax.set_xlabel("x")
            ax.legend()
            fig.tight_layout()
            fig.savefig(outdir / "predictions.png", dpi=120)
            plt.close(fig)
            written.append("predictions.png")
    return written


def run_experiment(spec: ExperimentSpec, outdir) -> MetricsReport:
    """Build, train, evaluate, and emit one experiment's artifacts."""
    validate_spec(spec)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()

    ds = build_dataset(spec)
    scaler = dt.scaler_fit(ds.train_y, *spec.scaler_range)
    scaled = dt.SplitDataset(
        ds.train_x, dt.scaler_apply(ds.train_y, scaler),
        ds.val_x, dt.scaler_apply(ds.val_y, scaler),
        ds.test_x, dt.scaler_apply(ds.test_y, scaler),
        m=ds.m, provenance=ds.provenance)

    files = []
    notes = [
        "complex_params counts complex parameter pairs; real_params counts "
        "real scalars (two per complex). Size tables elsewhere may use "
        "either convention.",
        "wall_ms columns in metrics.csv vary between reruns; all other "
        "emitted values are deterministic for a fixed seed.",
    ]

    net = _init_model(spec, ds.m, _STREAM_INIT)
    log = train(grad.cauchynet_trainable(net), scaled, spec.train)
    cplx, real = mdl.parameter_count(net)

    log.write_csv(outdir / "trainlog.csv", include_wall=False)
    files.append("trainlog.csv")
    _write_predictions(outdir / "predictions.csv", ds, scaler,
                       lambda X: mdl.predict(net, X))
    files.append("predictions.csv")
    mdl.save_checkpoint(net, scaler, outdir / "checkpoint.json",
                        seed=spec.train.seed)
    files.append("checkpoint.json")

    split_stats = {"cauchynet": _split_metrics(ds, scaler,
                                               lambda X: mdl.predict(net, X))}
    wall_ms = {"cauchynet": sum(e.wall_ms for e in log.entries)}

    if spec.baseline:
        mlp = bl.init_mlp(spec.model.h, ds.m,
                          Rng(derive_seed(spec.train.seed, _STREAM_BASELINE_INIT)))
        bcfg = copy.deepcopy(spec.train)
        if spec.baseline_lr is not None:
            bcfg.lr0 = spec.baseline_lr
        blog = train(bl.mlp_trainable(mlp), scaled, bcfg)
        blog.write_csv(outdir / "baseline_trainlog.csv", include_wall=False)
        files.append("baseline_trainlog.csv")
        _write_predictions(outdir / "baseline_predictions.csv", ds, scaler,
                           lambda X: bl.mlp_predict(mlp, X))
        files.append("baseline_predictions.csv")
        bl.save_mlp_checkpoint(mlp, scaler, outdir / "baseline_checkpoint.json",
                               seed=spec.train.seed)
        files.append("baseline_checkpoint.json")
        split_stats["relu_mlp"] = _split_metrics(ds, scaler,
                                                 lambda X: bl.mlp_predict(mlp, X))
        wall_ms["relu_mlp"] = sum(e.wall_ms for e in blog.entries)

    if spec.mask is not None:
        import csv as _csv
        with open(outdir / "imputation_errors.csv", "w", newline="",
                  encoding="utf-8") as fh:
            w = _csv.writer(fh)
            xcols = [f"x{i}" for i in range(ds.m)]
            w.writerow(xcols + ["y_true", "y_pred", "signed_err"])
            yp_s, _ = mdl.predict(net, ds.test_x)
            yp = dt.scaler_invert(yp_s, scaler)
            for xi, yt, ypi in zip(ds.test_x, ds.test_y, yp):
                w.writerow([repr(float(v)) for v in xi]
                           + [repr(float(yt)), repr(float(ypi)),
                              repr(float(ypi - yt))])
        files.append("imputation_errors.csv")

    import csv as _csv
    with open(outdir / "metrics.csv", "w", newline="", encoding="utf-8") as fh:
        w = _csv.writer(fh)
        w.writerow(["model", "split", "mse", "mae", "n",
                    "complex_params", "real_params", "wall_ms"])
        for model_name, stats in split_stats.items():
            if model_name == "cauchynet":
                pc, pr = cplx, real
            else:
                pr = bl.mlp_parameter_count(mlp)
                pc = ""
            for split_name, (mse, mae, n) in stats.items():
                w.writerow([model_name, split_name, repr(mse), repr(mae), n,
                            pc, pr, repr(wall_ms[model_name])])
    files.append("metrics.csv")

    manifest = {
        "name": spec.name,
        "spec": spec.to_dict(),
        "status": "ok",
        "files": {f: _sha256(outdir / f) for f in files},
        "nondeterministic_files": ["metrics.csv", "manifest.json"],
        "notes": notes,
        "wall_ms_total": (time.perf_counter() - t_start) * 1e3,
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")

    test_yp_s, _ = mdl.predict(net, ds.test_x)
    test_yp = dt.scaler_invert(test_yp_s, scaler)
    return MetricsReport(
        mse=metric_mse(test_yp, ds.test_y),
        mae=metric_mae(test_yp, ds.test_y),
        abs_errors=np.abs(test_yp - ds.test_y),
        complex_params=cplx,
        real_params=real,
        wall_ms=wall_ms["cauchynet"],
    )


# ---------------------------------------------------------------------------
# Ablation and sweeps


def run_lambda_ablation(spec: ExperimentSpec, lambdas=None, outdir=None):
    """One full train per penalty weight with a shared seed.

    Returns long-format rows (lam, seed, epoch, test_mse) with the test MSE
    in unscaled units snapshotted after every epoch, and writes them to
    lambda_ablation.csv when outdir is given.
    """
    lambdas = list(spec.lambdas if lambdas is None else lambdas)
    if not lambdas:
        raise ValidationError(["lambda list must be nonempty"])
    if any(l < 0 for l in lambdas):
        raise ValidationError(["lambda values must be nonnegative"])
    validate_spec(spec)

    ds = build_dataset(spec)
    scaler = dt.scaler_fit(ds.train_y, *spec.scaler_range)
    scaled = dt.SplitDataset(
        ds.train_x, dt.scaler_apply(ds.train_y, scaler),
        ds.val_x, dt.scaler_apply(ds.val_y, scaler),
        ds.test_x, dt.scaler_apply(ds.test_y, scaler),
        m=ds.m, provenance=ds.provenance)

    rows = []
    for lam in lambdas:
        sub = copy.deepcopy(spec)
        sub.train.lam = lam
        net = _init_model(sub, ds.m, _STREAM_INIT)

        def snapshot(epoch, m, _lam=lam):
            yp_s, _ = mdl.predict(m, ds.test_x)
            yp = dt.scaler_invert(yp_s, scaler)
            rows.append((_lam, spec.train.seed, epoch, metric_mse(yp, ds.test_y)))

        train(grad.cauchynet_trainable(net), scaled, sub.train,
              epoch_callback=snapshot)

    final = {lam: next(r[3] for r in reversed(rows) if r[0] == lam)
             for lam in lambdas}
    best = min(final, key=final.get)
    summary = (f"final test MSE by lambda: "
               + ", ".join(f"{l:g}: {final[l]:.6g}" for l in lambdas)
               + f"; best at lambda={best:g} (single-seed observation, not a gate)")

    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        import csv as _csv
        with open(outdir / "lambda_ablation.csv", "w", newline="",
                  encoding="utf-8") as fh:
            w = _csv.writer(fh)
            w.writerow(["lambda", "seed", "epoch", "test_mse"])
            for lam, seed, epoch, mse in rows:
                w.writerow([repr(float(lam)), seed, epoch, repr(mse)])
        (outdir / "lambda_ablation_summary.txt").write_text(summary + "\n",
                                                            encoding="utf-8")
    return rows, summary


def _sweep_cell(spec: ExperimentSpec, h, n, lr, wd):
    sub = copy.deepcopy(spec)
    sub.model.h = int(h)
    sub.n_samples = int(n)
    sub.train.lr0 = float(lr)
    sub.train.weight_decay = float(wd)
    ds = build_dataset(sub)
    scaler = dt.scaler_fit(ds.train_y, *sub.scaler_range)
    scaled = dt.SplitDataset(
        ds.train_x, dt.scaler_apply(ds.train_y, scaler),
        ds.val_x, dt.scaler_apply(ds.val_y, scaler),
        ds.test_x, dt.scaler_apply(ds.test_y, scaler),
        m=ds.m, provenance=ds.provenance)
    net = _init_model(sub, ds.m, _STREAM_INIT)
    train(grad.cauchynet_trainable(net), scaled, sub.train)
    yp_s, _ = mdl.predict(net, ds.test_x)
    yp = dt.scaler_invert(yp_s, scaler)
    return metric_mse(yp, ds.test_y)


def run_sensitivity_grid(spec: ExperimentSpec, hidden=None, data_sizes=None,
                         lrs=None, wds=None, outdir=None, threads: int = 1):
    """Cross-product sweep over hidden width, data size, lr, weight decay.

    Individual cell failures (divergence, poles) become NaN rows carrying
    an error note; the sweep only fails if every cell fails.  Rows are
    (h, n, lr, wd, test_mse, note) in deterministic axis order.
    """
    hidden = list(spec.grid_hidden if hidden is None else hidden)
    data_sizes = list(spec.grid_sizes if data_sizes is None else data_sizes)
    lrs = list(spec.grid_lrs if lrs is None else lrs)
    wds = list(spec.grid_wds if wds is None else wds)
    if not (hidden and data_sizes and lrs and wds):
        raise ValidationError(["every sweep axis must be nonempty"])
    validate_spec(spec)

    cells = [(h, n, lr, wd) for h in hidden for n in data_sizes
             for lr in lrs for wd in wds]

    def evaluate(cell):
        h, n, lr, wd = cell
        try:
            return (h, n, lr, wd, _sweep_cell(spec, h, n, lr, wd), "")
        except (NonFiniteError, ValidationError, ValueError) as exc:
            return (h, n, lr, wd, float("nan"), f"failed: {exc}")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, cells))
    else:
        rows = [evaluate(c) for c in cells]

    if all(math.isnan(r[4]) for r in rows):
        raise NonFiniteError("every sweep cell failed")

    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        import csv as _csv
        with open(outdir / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
            w = _csv.writer(fh)
            w.writerow(["h", "n", "lr", "wd", "test_mse", "note"])
            for h, n, lr, wd, mse, note in rows:
                w.writerow([h, n, repr(float(lr)), repr(float(wd)),
                            repr(float(mse)), note])
    return rows


# ---------------------------------------------------------------------------
# Kernel quadrature demo


KERNEL_DEMOS = {
    "one": (lambda z: 1.0 + 0j, lambda x: np.ones_like(x)),
    "square": (lambda z: z * z, lambda x: x * x),
    "exp": (np.exp, np.exp),
    "inverse-shift": (lambda z: 1.0 / (2.0 - z), lambda x: 1.0 / (2.0 - x)),
}


def run_kernel_demo(target: str = "square", a: float = 2.0, b: float = 1.0,
                    center: complex = 0j, node_counts=(16, 32, 64, 128),
                    eval_lo: float = -1.0, eval_hi: float = 1.0,
                    grid: int = 201, outdir=None):
    """Sup-norm quadrature error over a dense interior grid per node count.

    Emits one (nodes, sup_error) row per requested node count regardless of
    accuracy.  The target must be holomorphic on and inside the contour for
    the reconstruction to converge.
    """
    if target not in KERNEL_DEMOS:
        raise ValidationError([f"unknown kernel demo target {target!r}; "
                               f"known: {sorted(KERNEL_DEMOS)}"])
    f, f_real = KERNEL_DEMOS[target]
    xs = np.linspace(eval_lo, eval_hi, grid)
    rows = []
    for n in node_counts:
        mesh = kernel.ellipse_mesh(a, b, center=center, nodes=int(n))
        exp = kernel.quadrature_expansion(f, mesh)
        vals = kernel.evaluate_expansion_grid(exp, xs)
        rows.append((int(n), float(np.abs(vals - f_real(xs)).max())))
    if outdir is not None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        import csv as _csv
        with open(outdir / "kernel_demo.csv", "w", newline="", encoding="utf-8") as fh:
            w = _csv.writer(fh)
            w.writerow(["nodes", "sup_error"])
            for n, err in rows:
                w.writerow([n, repr(err)])
    return rows


# ---------------------------------------------------------------------------
# Presets


def _preset_intro_spike():
    return ExperimentSpec(
        name="intro-spike", generator="intro-spike", n_samples=400,
        model=ModelSpec(h=128, init="elliptical", init_major=1.3, init_minor=0.2),
        train=TrainConfig(epochs=500, lr0=0.001, weight_decay=0.0, lam=0.1, seed=10),
        baseline=True, baseline_lr=0.001)


def _preset_exp1():
    return ExperimentSpec(
        name="exp1", generator="exp1", n_samples=300,
        model=ModelSpec(h=128, init="elliptical", init_major=1.02, init_minor=0.1),
        train=TrainConfig(epochs=200, lr0=0.01, weight_decay=1e-4, lam=0.1, seed=10),
        baseline=True)


def _preset_exp2_gap():
    return ExperimentSpec(
        name="exp2-gap", generator="exp2-gap", n_samples=360,
        mask={"kind": "intervals", "half_width": 0.15, "centers": "turning-points"},
        masked_fractions=(0.75, 0.25),
        model=ModelSpec(h=128, init="elliptical", init_major=2.1, init_minor=0.4),
        train=TrainConfig(epochs=500, lr0=0.01, weight_decay=1e-4, lam=0.1, seed=10))


def _preset_exp2_disk():
    return ExperimentSpec(
        name="exp2-disk", generator="disk2d", n_samples=3000,
        mask={"kind": "disk", "center": (0.0, 0.0), "radius": 0.3},
        masked_fractions=(0.6, 0.4),
        model=ModelSpec(h=128, init="elliptical", init_major=0.9, init_minor=0.3),
        train=TrainConfig(epochs=200, lr0=0.01, weight_decay=1e-4, lam=0.1, seed=10))


def _preset_exp3_surface():
    return ExperimentSpec(
        name="exp3-surface", generator="surface2d", n_samples=300,
        model=ModelSpec(h=128, init="elliptical", init_major=1.8, init_minor=0.8),
        train=TrainConfig(epochs=500, lr0=0.01, weight_decay=1e-4, lam=0.1, seed=10))


def _preset_exp4_csv():
    return ExperimentSpec(
        name="exp4-csv", generator="csv-trend", n_samples=700,
        scaler_range=(-1.0, 1.0), period=12,
        model=ModelSpec(h=128, init="elliptical", init_major=1.1, init_minor=0.3),
        train=TrainConfig(epochs=200, lr0=0.01, weight_decay=1e-4, lam=0.1, seed=10))


def _preset_exp5_lambda():
    spec = _preset_exp1()
    spec.name = "exp5-lambda"
    spec.baseline = False
    return spec


def _preset_exp5_grid():
    spec = _preset_exp1()
    spec.name = "exp5-grid"
    spec.baseline = False
    return spec


PRESETS = {
    "intro-spike": _preset_intro_spike,
    "exp1": _preset_exp1,
    "exp2-gap": _preset_exp2_gap,
    "exp2-disk": _preset_exp2_disk,
    "exp3-surface": _preset_exp3_surface,
    "exp4-csv": _preset_exp4_csv,
    "exp5-lambda": _preset_exp5_lambda,
    "exp5-grid": _preset_exp5_grid,
}

PRESET_SUMMARIES = {
    "intro-spike": "sharp-peak 1D comparison vs the ReLU baseline (500 epochs, lr 0.001)",
    "exp1": "sharp-peak/oscillation 1D approximation, 150 train points, 200 epochs",
    "exp2-gap": "1D gap filling: six masked turning-point intervals become the test set",
    "exp2-disk": "2D imputation: radius-0.3 disk withheld from 3000 random samples",
    "exp3-surface": "2D polynomial-rational surface, 300 random samples",
    "exp4-csv": "decompose a positive CSV series and fit the trend (needs data_path)",
    "exp5-lambda": "imaginary-penalty ablation over the preset lambda set",
    "exp5-grid": "hidden/data/lr/weight-decay sensitivity sweep axes",
}


def get_preset(name: str) -> ExperimentSpec:
    if name not in PRESETS:
        raise ValidationError([f"unknown preset {name!r}; known: {sorted(PRESETS)}"])
    return PRESETS[name]()
