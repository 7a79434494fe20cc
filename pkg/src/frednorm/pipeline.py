"""normalize -> FredNormer -> linear backbone -> denormalize, trained on MSE."""
import dataclasses
import json
import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import backbone as bb
from . import frednormer as fn
from .data import SynthSpec, load_csv, make_windows, split_bounds, synthesize
from .norm import denormalize, normalize
from .optim import SGD, Adam, clip_global_norm
from .spectral import n_freqs
from .stability import EPS, StabilityMeasure, load_measure, measure_windows, save_measure

log = logging.getLogger(__name__)


@dataclass
class Config:
    """Flat run configuration. Every key has a default."""
    # data source: a CSV path, or the synthetic generator when empty
    data: str = ""
    date_column: bool = None
    synth_length: int = 20000
    synth_channels: int = 2
    synth_stable_tones: list = field(default_factory=lambda: [[4, 1.0], [18, 0.5]])
    synth_unstable_tones: list = field(default_factory=lambda: [[9, 0.0, 2.0]])
    synth_trend: float = 0.0
    synth_noise: float = 0.1
    synth_seed: int = 0
    # windows
    lookback: int = 96
    horizon: int = 96
    split: list = field(default_factory=lambda: [0.6, 0.2, 0.2])
    stride: int = 1
    scale: bool = True
    # model
    filter: str = "stability"
    train_frednormer: bool = True
    init: str = "identity"
    kernel: int = None
    epsilon: float = EPS
    # training
    epochs: int = 10
    batch_size: int = 32
    lr: float = 1e-3
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0
    grad_clip: float = None
    # ablation
    ablate_cutoff: int = None
    ablate_m: int = None

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self):
        return dataclasses.asdict(self)

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)

    def validate(self):
        for name in ("lookback", "horizon", "stride", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.lookback < 2:
            raise ValueError("lookback must be at least 2")
        if self.lr < 0:
            raise ValueError("lr must be non-negative")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError(f"optimizer must be 'adam' or 'sgd', got {self.optimizer!r}")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ValueError("grad_clip must be positive")
        fn.parse_filter(self.filter)

    def synth_spec(self):
        return SynthSpec(self.synth_length, self.synth_channels, self.lookback,
                         [tuple(t) for t in self.synth_stable_tones],
                         [tuple(t) for t in self.synth_unstable_tones],
                         self.synth_trend, self.synth_noise, self.synth_seed)


def load_series(cfg, data=None):
    path = data or cfg.data
    if path:
        return load_csv(path, cfg.date_column)
    return synthesize(cfg.synth_spec())


@dataclass
class Splits:
    train: object
    val: object
    test: object
    offset: np.ndarray
    scale: np.ndarray


def prepare(cfg, series):
    """Optionally standardize with train-part statistics, then cut windows."""
    series = np.asarray(series, dtype=float)
    offset = np.zeros(series.shape[1])
    scale = np.ones(series.shape[1])
    if cfg.scale:
        lo, hi = split_bounds(len(series), cfg.split)[0]
        offset = series[lo:hi].mean(axis=0)
        scale = series[lo:hi].std(axis=0)
        scale[scale == 0] = 1.0
        series = (series - offset) / scale
    parts = make_windows(series, cfg.lookback, cfg.horizon, cfg.split, cfg.stride)
    return Splits(*parts, offset, scale)


@dataclass
class ForecastModel:
    measure: StabilityMeasure
    backbone: object
    kind: object = field(default_factory=fn.StabilityWeighting)
    params: fn.FredNormerParams = None

    def transform(self, x_z):
        if isinstance(self.kind, fn.StabilityWeighting):
            return fn.forward(self.params, self.measure, x_z)
        mask = fn.filter_mask(self.kind, self.measure.n_freqs)[:, None]
        return fn.modulate(x_z, mask, mask)[0], None

    def predict(self, x):
        x_z, stats = normalize(x)
        h, _ = self.transform(x_z)
        return denormalize(bb.predict(self.backbone, h), stats)

    def forward_backward(self, x, y):
        """MSE loss and gradients for every backbone and FredNormer array."""
        x_z, stats = normalize(x)
        h, tape = self.transform(x_z)
        y_z = bb.predict(self.backbone, h)
        pred = denormalize(y_z, stats)
        err = pred - y
        loss = float(np.mean(err * err))
        g_pred = 2.0 * err / err.size
        g_bb, g_h = bb.backbone_backward(self.backbone, h, g_pred * stats.scale)
        grads = {"backbone." + k: v for k, v in g_bb.items()}
        if tape is not None:
            g_fn, _ = fn.backward(self.params, tape, g_h)
            for name, g in zip(fn.FredNormerParams.names, g_fn.arrays()):
                grads["frednormer." + name] = g
        return loss, grads

    def named_arrays(self, include_frednormer=True):
        out = {"backbone." + n: a for n, a in zip(self.backbone.param_names(), self.backbone.arrays())}
        if include_frednormer and self.params is not None:
            for n, a in zip(fn.FredNormerParams.names, self.params.arrays()):
                out["frednormer." + n] = a
        return out

    def copy(self):
        return ForecastModel(self.measure, self.backbone.copy(), self.kind,
                             None if self.params is None else self.params.copy())


def build_model(cfg, train_windows):
    measure = measure_windows(train_windows.inputs, cfg.epsilon)
    kind = fn.parse_filter(cfg.filter)
    k = n_freqs(cfg.lookback)
    params = fn.init_params(k, cfg.init) if isinstance(kind, fn.StabilityWeighting) else None
    return ForecastModel(measure, bb.init_backbone(cfg.lookback, cfg.horizon, cfg.kernel), kind, params)


def evaluate(model, windows, batch_size=1024):
    if len(windows) == 0:
        raise ValueError("cannot evaluate on an empty window set")
    se = ae = 0.0
    for i in range(0, len(windows), batch_size):
        err = model.predict(windows.inputs[i:i + batch_size]) - windows.targets[i:i + batch_size]
        se += float(np.sum(err * err))
        ae += float(np.sum(np.abs(err)))
    n = windows.targets.size
    return {"mse": se / n, "mae": ae / n}


class TrainingError(RuntimeError):
    pass


def fit(cfg, splits, model=None):
    """Train on ``splits.train``; return (best-validation model, per-epoch history)."""
    if model is None:
        model = build_model(cfg, splits.train)
    arrays = model.named_arrays(include_frednormer=cfg.train_frednormer)
    names = list(arrays)
    if cfg.optimizer == "adam":
        opt = Adam(arrays.values(), cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps)
    else:
        opt = SGD(arrays.values(), cfg.lr)
    rng = np.random.default_rng(cfg.seed)
    n = len(splits.train)
    if n == 0:
        raise ValueError("training split has no windows")
    have_val = len(splits.val) > 0
    best, best_score, history = model.copy(), np.inf, []
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        losses = []
        for b, i in enumerate(range(0, n, cfg.batch_size)):
            idx = order[i:i + cfg.batch_size]
            loss, grads = model.forward_backward(splits.train.inputs[idx], splits.train.targets[idx])
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}, batch {b}")
            g = [grads[k] for k in names]
            if cfg.grad_clip:
                g = clip_global_norm(g, cfg.grad_clip)
            if cfg.lr > 0:
                opt.step(g)
            losses.append(loss)
        row = {"epoch": epoch, "train_loss": float(np.mean(losses))}
        score = row["train_loss"]
        if have_val:
            row.update({"val_" + k: v for k, v in evaluate(model, splits.val).items()})
            score = row["val_mse"]
        history.append(row)
        log.info("epoch %d: %s", epoch, row)
        if score < best_score:
            best, best_score = model.copy(), score
    return best, history


def train(cfg, series=None):
    """Full run: data, stability measure, training, test metrics."""
    t0 = time.perf_counter()
    if series is None:
        series = load_series(cfg)
    splits = prepare(cfg, series)
    model, history = fit(cfg, splits)
    metrics = {"config": cfg.to_dict(), "epochs": history}
    if len(splits.test):
        metrics["test"] = evaluate(model, splits.test)
    metrics["wall_time"] = time.perf_counter() - t0
    return model, splits, metrics


# run directory ----------------------------------------------------------------

def save_run(run_dir, cfg, model, splits, metrics):
    os.makedirs(run_dir, exist_ok=True)
    with open(os.path.join(run_dir, "config.json"), "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2)
    save_measure(model.measure, os.path.join(run_dir, "measure.txt"))
    bb.save_backbone(model.backbone, os.path.join(run_dir, "backbone.txt"))
    if model.params is not None:
        fn.save_params(model.params, os.path.join(run_dir, "frednormer.txt"))
    with open(os.path.join(run_dir, "scaler.txt"), "w") as fh:
        fh.write(" ".join(repr(float(v)) for v in splits.offset) + "\n")
        fh.write(" ".join(repr(float(v)) for v in splits.scale) + "\n")
    with open(os.path.join(run_dir, "metrics.json"), "w") as fh:
        json.dump(metrics, fh, indent=2)


def load_run(run_dir):
    cfg = Config.load(os.path.join(run_dir, "config.json"))
    kind = fn.parse_filter(cfg.filter)
    params = None
    if isinstance(kind, fn.StabilityWeighting):
        params = fn.load_params(os.path.join(run_dir, "frednormer.txt"))
    model = ForecastModel(load_measure(os.path.join(run_dir, "measure.txt")),
                          bb.load_backbone(os.path.join(run_dir, "backbone.txt")), kind, params)
    return cfg, model


def ablation_filters(cfg, seed=0):
    """Stability weighting plus a low-pass and a random-bin filter keeping the same bin count."""
    k = n_freqs(cfg.lookback)
    cutoff = cfg.ablate_cutoff or max(1, (k - 1) // 4)
    m = cfg.ablate_m or cutoff
    return {"StabilityWeighting": "stability",
            "LowPass": f"lowpass:{cutoff}",
            "RandomSelect": f"random:{m}:{seed}"}
