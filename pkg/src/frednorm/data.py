"""Series ingestion, synthetic generation and sliding-window splits."""
import csv
from dataclasses import dataclass, field

import numpy as np


class CsvError(ValueError):
    pass


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path, date_column=None):
    """Read a (T, C) series from a CSV with one header row.

    ``date_column=None`` drops the first column when its first data cell is
    not numeric (ETT files start with an ISO-8601 date).
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise CsvError(f"{path}: need a header row and at least one data row")
    header, body = rows[0], [r for r in rows[1:] if r]
    if date_column is None:
        date_column = not _is_number(body[0][0])
    skip = 1 if date_column else 0
    n_cols = len(header)
    out = np.empty((len(body), n_cols - skip))
    for i, row in enumerate(body):
        if len(row) != n_cols:
            raise CsvError(f"{path}: row {i + 2} has {len(row)} fields, header has {n_cols}")
        for j in range(skip, n_cols):
            try:
                out[i, j - skip] = float(row[j])
            except ValueError:
                raise CsvError(f"{path}: row {i + 2}, column {j + 1} ({header[j]!r}): "
                               f"cannot parse {row[j]!r}") from None
    return out


def write_csv(path, series, names=None):
    series = np.atleast_2d(np.asarray(series, dtype=float))
    names = names or [f"ch{c}" for c in range(series.shape[1])]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in series:
            w.writerow([repr(float(v)) for v in row])


@dataclass
class SynthSpec:
    length: int = 20000
    channels: int = 2
    window: int = 96
    stable_tones: list = field(default_factory=lambda: [(4, 1.0), (18, 0.5)])
    unstable_tones: list = field(default_factory=lambda: [(9, 0.0, 2.0)])
    trend_slope: float = 0.0
    noise_std: float = 0.1
    seed: int = 0

    def validate(self):
        k = self.window // 2 + 1
        for tone in list(self.stable_tones) + list(self.unstable_tones):
            if not 0 <= tone[0] < k:
                raise ValueError(f"tone bin {tone[0]} outside [0, {k - 1}]")
        for _, lo, hi in self.unstable_tones:
            if lo > hi:
                raise ValueError(f"amplitude range ({lo}, {hi}) is reversed")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")


def synthesize(spec):
    """Trend + fixed-amplitude tones + tones whose amplitude is redrawn every
    ``window`` steps + Gaussian noise. Tone frequencies are DFT bins of a
    ``window``-length frame, so a stable tone has the same amplitude in every
    window regardless of where it starts.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    t = np.arange(spec.length, dtype=float)[:, None]
    x = np.repeat(spec.trend_slope * t, spec.channels, axis=1)
    n_seg = -(-spec.length // spec.window)
    seg = np.arange(spec.length) // spec.window
    for k, amp in spec.stable_tones:
        phase = rng.uniform(0, 2 * np.pi, spec.channels)
        x += amp * np.sin(2 * np.pi * k * t / spec.window + phase)
    for k, lo, hi in spec.unstable_tones:
        phase = rng.uniform(0, 2 * np.pi, spec.channels)
        amp = rng.uniform(lo, hi, (n_seg, spec.channels))[seg]
        x += amp * np.sin(2 * np.pi * k * t / spec.window + phase)
    if spec.noise_std > 0:
        x += rng.normal(0.0, spec.noise_std, x.shape)
    return x


@dataclass
class WindowSet:
    inputs: np.ndarray   # (N, L, C)
    targets: np.ndarray  # (N, H, C)
    starts: np.ndarray   # series index of each input's first step

    def __len__(self):
        return len(self.inputs)


def split_bounds(n, fractions):
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1) > 1e-9:
        raise ValueError(f"split fractions must be three non-negative numbers summing to 1, got {fractions}")
    n_train = int(n * fractions[0])
    n_val = int(n * fractions[1])
    return [(0, n_train), (n_train, n_train + n_val), (n_train + n_val, n)]


def _windows(series, lo, hi, lookback, horizon, stride):
    span = lookback + horizon
    n = (hi - lo - span) // stride + 1 if hi - lo >= span else 0
    c = series.shape[1]
    if n <= 0:
        return WindowSet(np.empty((0, lookback, c)), np.empty((0, horizon, c)), np.empty(0, int))
    starts = lo + stride * np.arange(n)
    view = np.lib.stride_tricks.sliding_window_view(series[lo:hi], span, axis=0)[::stride]
    view = np.swapaxes(view, 1, 2)[:n]
    return WindowSet(np.ascontiguousarray(view[:, :lookback]),
                     np.ascontiguousarray(view[:, lookback:]), starts)


def make_windows(series, lookback, horizon, fractions=(0.6, 0.2, 0.2), stride=1):
    """Chronological train/val/test split, then (input, target) pairs inside each part."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 2:
        raise ValueError("series must be (T, C)")
    if lookback < 1 or horizon < 1 or stride < 1:
        raise ValueError("lookback, horizon and stride must be positive")
    if len(series) < lookback + horizon:
        raise ValueError(f"series of length {len(series)} is shorter than lookback + horizon "
                         f"= {lookback + horizon}")
    return tuple(_windows(series, lo, hi, lookback, horizon, stride)
                 for lo, hi in split_bounds(len(series), fractions))
