"""
Frequency stability on a synthetic dataset
==========================================

Two tones share a series: one keeps its amplitude, the other gets a fresh
random amplitude every 96 steps. The stability score (mean amplitude over its
standard deviation, across training windows) separates them.
"""
import numpy as np

from frednorm import SynthSpec, make_windows, measure_windows, stable_subset, synthesize

spec = SynthSpec(length=20000, channels=2, window=96, stable_tones=[(4, 1.0), (18, 0.5)],
                 unstable_tones=[(9, 0.0, 2.0)], noise_std=0.1, seed=0)
series = synthesize(spec)
train, val, test = make_windows(series, lookback=96, horizon=96)
print("train/val/test windows:", len(train), len(val), len(test))

measure = measure_windows(train.inputs)
s = measure.scores[:, 0]
for k in (4, 9, 18, 30):
    print(f"bin {k:2d}: mean {measure.mean[k, 0]:8.3f}  std {measure.std[k, 0]:7.3f}  S {s[k]:7.2f}")

# the two most stable non-DC bins of channel 0
print("stable subset (m=2):", sorted(stable_subset(measure, 2, channel=0)))

###############################################################################
# Per-bin values for plotting (the CLI's `stability` command writes the same
# table to CSV).
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    plt.semilogy(s, "r-")
    plt.xlabel("frequency bin")
    plt.ylabel("stability score")
    plt.savefig("stability.png")
    print("wrote stability.png")
