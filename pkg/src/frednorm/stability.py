"""Per-frequency stability score over a training set.

The score is the reciprocal coefficient of variation of each bin's DFT
amplitude across training windows, accumulated in one streaming pass.
"""
from dataclasses import dataclass

import numpy as np

from .spectral import amplitudes, dft

EPS = 1e-5


class FormatError(ValueError):
    """Raised when a measure or parameter file cannot be parsed."""


@dataclass
class AmplitudeAccumulator:
    sum_a: np.ndarray
    sum_a2: np.ndarray
    count: int = 0

    @classmethod
    def empty(cls, n_freqs, n_channels):
        shape = (n_freqs, n_channels)
        return cls(np.zeros(shape), np.zeros(shape), 0)

    @property
    def shape(self):
        return self.sum_a.shape

    def merge(self, other):
        if other.shape != self.shape:
            raise ValueError(f"cannot merge accumulators of shape {self.shape} and {other.shape}")
        return AmplitudeAccumulator(self.sum_a + other.sum_a, self.sum_a2 + other.sum_a2,
                                    self.count + other.count)


def accumulate(acc, window):
    """Add one window, or a batch of shape (B, L, C), to the running sums.

    Amplitudes are taken on the window as given (no differencing or scaling).
    Returns a new accumulator; ``acc`` is left untouched.
    """
    x = np.asarray(window, dtype=float)
    batch = x if x.ndim == 3 else x[None]
    a = amplitudes(dft(batch))
    if a.shape[1:] != acc.shape:
        raise ValueError(f"window spectrum shape {a.shape[1:]} does not match accumulator {acc.shape}")
    return AmplitudeAccumulator(acc.sum_a + a.sum(axis=0), acc.sum_a2 + (a * a).sum(axis=0),
                                acc.count + batch.shape[0])


@dataclass(frozen=True)
class StabilityMeasure:
    scores: np.ndarray
    count: int
    epsilon: float = EPS
    mean: np.ndarray = None
    std: np.ndarray = None

    @property
    def n_freqs(self):
        return self.scores.shape[0]

    @property
    def n_channels(self):
        return self.scores.shape[1]


def finalize(acc, epsilon=EPS):
    """mu = sum/N, sigma = sqrt(max(sum2/N - mu^2, 0) + eps), S = mu / (sigma + eps)."""
    if acc.count < 1:
        raise ValueError("cannot compute stability over an empty dataset")
    n = acc.count
    mu = acc.sum_a / n
    var = np.maximum(acc.sum_a2 / n - mu * mu, 0.0)
    sigma = np.sqrt(var + epsilon)
    return StabilityMeasure(mu / (sigma + epsilon), n, epsilon, mu, sigma)


def measure_windows(windows, epsilon=EPS, chunk=4096):
    """Stability over an array of windows (N, L, C), accumulated in chunks."""
    windows = np.asarray(windows, dtype=float)
    acc = AmplitudeAccumulator.empty(windows.shape[1] // 2 + 1, windows.shape[2])
    for i in range(0, len(windows), chunk):
        acc = accumulate(acc, windows[i:i + chunk])
    return finalize(acc, epsilon)


def stable_subset(measure, m, channel):
    """Indices of the m non-zero bins with the highest score; ties go to the lower bin."""
    k = measure.n_freqs
    if not 1 <= m <= k - 1:
        raise ValueError(f"m must lie in [1, {k - 1}], got {m}")
    s = measure.scores[1:, channel]
    # stable sort on -s keeps lower indices first among equal scores
    order = np.argsort(-s, kind="stable")[:m] + 1
    return set(int(i) for i in order)


def _fmt(v):
    return repr(float(v))


def save_measure(measure, path):
    k, c = measure.scores.shape
    lines = [f"{k} {c} {measure.count} {_fmt(measure.epsilon)}"]
    lines += [" ".join(_fmt(v) for v in row) for row in measure.scores]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_measure(path):
    with open(path) as fh:
        lines = [ln.split() for ln in fh.read().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 4:
        raise FormatError(f"{path}: header must be 'K C N epsilon'")
    try:
        k, c, n = (int(v) for v in lines[0][:3])
        eps = float(lines[0][3])
    except ValueError as err:
        raise FormatError(f"{path}: bad header: {err}") from None
    rows = lines[1:]
    if len(rows) != k:
        raise FormatError(f"{path}: header says K={k} but found {len(rows)} rows")
    scores = np.empty((k, c))
    for i, row in enumerate(rows):
        if len(row) != c:
            raise FormatError(f"{path}: row {i} has {len(row)} values, header says C={c}")
        try:
            scores[i] = [float(v) for v in row]
        except ValueError as err:
            raise FormatError(f"{path}: row {i}: {err}") from None
    return StabilityMeasure(scores, n, eps)
