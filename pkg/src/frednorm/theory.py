"""Numeric checks that z-score normalization only rescales non-zero frequencies.

These mirror the uniform-scaling lemma, the stable-subset proportion theorem
and the stable-bins-weighted-higher goal as executable checks.
"""
from dataclasses import dataclass, field

import numpy as np

from .frednormer import effective_weights
from .norm import normalize
from .spectral import amplitudes, dft

LEMMA_TOL = 1e-8
THEOREM_TOL = 1e-10


class DegenerateInput(ValueError):
    pass


@dataclass
class LemmaReport:
    max_deviation: float
    sigma: float
    dc_excluded: bool = True
    threshold: float = LEMMA_TOL

    @property
    def passed(self):
        return self.max_deviation < self.threshold

    def to_dict(self):
        return {"check": "lemma1", "max_deviation": self.max_deviation, "sigma": self.sigma,
                "dc_excluded": self.dc_excluded, "threshold": self.threshold, "passed": self.passed}


@dataclass
class ProportionReport:
    ratio_before: float
    ratio_after: float
    subset: list = field(default_factory=list)
    threshold: float = THEOREM_TOL

    @property
    def difference(self):
        return abs(self.ratio_before - self.ratio_after)

    @property
    def passed(self):
        return self.difference < self.threshold

    def to_dict(self):
        return {"check": "theorem1", "ratio_before": self.ratio_before,
                "ratio_after": self.ratio_after, "difference": self.difference,
                "subset": list(self.subset), "threshold": self.threshold, "passed": self.passed}


def _channel_amplitudes(window, channel):
    x = np.asarray(window, dtype=float)[:, [channel]]
    x_z, stats = normalize(x)
    sigma = float(stats.std[0, 0])
    if sigma <= stats.eps:
        raise DegenerateInput(f"channel {channel} is (nearly) constant; std={sigma:g}")
    return amplitudes(dft(x))[:, 0], amplitudes(dft(x_z))[:, 0], sigma


def verify_lemma1(window, channel=0, floor=1e-12):
    """Max over k != 0 of |A_z(k) * sigma - A(k)| / max(A(k), floor * max A)."""
    a, a_z, sigma = _channel_amplitudes(window, channel)
    a, a_z = a[1:], a_z[1:]
    denom = np.maximum(a, floor * max(float(a.max()), 1.0))
    dev = float(np.max(np.abs(a_z * sigma - a) / denom))
    return LemmaReport(dev, sigma)


def _ratio(a, subset):
    total = a[1:].sum()
    return float(a[list(subset)].sum() / total) if subset else 0.0


def verify_theorem1(window, channel=0, subset=()):
    """Share of non-DC amplitude carried by ``subset``, before and after z-scoring."""
    subset = sorted(int(k) for k in subset)
    a, a_z, _ = _channel_amplitudes(window, channel)
    k = len(a)
    if any(not 1 <= s <= k - 1 for s in subset):
        raise ValueError(f"subset must lie in [1, {k - 1}]; the DC bin is not covered")
    return ProportionReport(_ratio(a, subset), _ratio(a_z, subset), subset)


def verify_problem1(params, measure, subset, others=None):
    """Do the learned weights favour the stable bins?

    Effective weight per bin is the mean over the real and imaginary branches
    and over channels of ``S * w + b``. Returns ``(holds, report)``; ``holds``
    is True when every bin in ``subset`` outweighs every bin in ``others``
    (default: all remaining non-DC bins).
    """
    scores = np.asarray(getattr(measure, "scores", measure), dtype=float)
    er, ei = effective_weights(params, scores)
    per_bin = (0.5 * (er + ei)).mean(axis=1)
    k = len(per_bin)
    stable = sorted(int(i) for i in subset)
    if others is None:
        others = [i for i in range(1, k) if i not in stable]
    others = sorted(int(i) for i in others)
    report = {"check": "problem1", "subset": stable, "others": others,
              "weights": per_bin.tolist()}
    if np.ptp(per_bin[1:]) == 0:
        report["status"] = "identity weighting, ordering undefined"
        return False, report
    lo = float(per_bin[stable].min())
    hi = float(per_bin[others].max()) if others else -np.inf
    holds = lo > hi
    report.update(status="holds" if holds else "violated", min_stable=lo, max_other=hi)
    return holds, report


def verify_series(series, lookback, stride=None, n_subsets=1, seed=0):
    """Run the lemma and theorem checks on every window/channel of a series.

    Yields report dicts; constant windows are reported and skipped.
    """
    series = np.asarray(series, dtype=float)
    stride = stride or lookback
    rng = np.random.default_rng(seed)
    k = lookback // 2 + 1
    for start in range(0, len(series) - lookback + 1, stride):
        w = series[start:start + lookback]
        for c in range(series.shape[1]):
            try:
                rep = verify_lemma1(w, c).to_dict()
            except DegenerateInput as err:
                yield {"check": "lemma1", "start": start, "channel": c, "skipped": str(err)}
                continue
            yield {**rep, "start": start, "channel": c}
            for _ in range(n_subsets):
                size = int(rng.integers(0, k))
                subset = rng.choice(np.arange(1, k), size=size, replace=False)
                yield {**verify_theorem1(w, c, subset).to_dict(), "start": start, "channel": c}
