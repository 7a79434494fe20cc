"""Per-window, per-channel z-score normalization and its inverse."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class InstanceStats:
    mean: np.ndarray  # (..., 1, C)
    std: np.ndarray   # (..., 1, C), population std
    eps: float = 1e-5

    @property
    def scale(self):
        # constant channels have std 0; the floor keeps the division finite
        return np.maximum(self.std, self.eps)


def normalize(window, eps=1e-5):
    x = np.asarray(window, dtype=float)
    mean = x.mean(axis=-2, keepdims=True)
    std = x.std(axis=-2, keepdims=True)
    stats = InstanceStats(mean, std, eps)
    return (x - mean) / stats.scale, stats


def denormalize(window, stats):
    y = np.asarray(window, dtype=float)
    if y.shape[-1] != stats.mean.shape[-1]:
        raise ValueError(f"window has {y.shape[-1]} channels, stats have {stats.mean.shape[-1]}")
    return y * stats.scale + stats.mean
