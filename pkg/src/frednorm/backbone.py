"""DLinear-style linear forecaster with an exact backward pass.

One (H, L) map shared by all channels. With a moving-average decomposition
the input is split into trend and remainder, each with its own map.
"""
from dataclasses import dataclass, field

import numpy as np

from .stability import FormatError


def moving_average_matrix(length, kernel):
    """(L, L) operator of a centred moving average with edge-replicated padding."""
    if kernel < 1 or kernel % 2 == 0 or kernel > length:
        raise ValueError(f"kernel must be odd and in [1, {length}], got {kernel}")
    half = kernel // 2
    m = np.zeros((length, length))
    for i in range(length):
        for j in range(i - half, i + half + 1):
            m[i, min(max(j, 0), length - 1)] += 1.0 / kernel
    return m


@dataclass
class LinearBackbone:
    weight: np.ndarray            # (H, L), acts on the remainder when decomposed
    bias: np.ndarray              # (H,)
    kernel: int = 0               # 0 = no decomposition
    weight_trend: np.ndarray = None
    bias_trend: np.ndarray = None
    _ma: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def horizon(self):
        return self.weight.shape[0]

    @property
    def lookback(self):
        return self.weight.shape[1]

    @property
    def decomposed(self):
        return self.kernel > 0

    @property
    def trend_operator(self):
        if self._ma is None:
            self._ma = moving_average_matrix(self.lookback, self.kernel)
        return self._ma

    def param_names(self):
        names = ["weight", "bias"]
        if self.decomposed:
            names += ["weight_trend", "bias_trend"]
        return names

    def arrays(self):
        return [getattr(self, n) for n in self.param_names()]

    def copy(self):
        return LinearBackbone(self.weight.copy(), self.bias.copy(), self.kernel,
                              None if self.weight_trend is None else self.weight_trend.copy(),
                              None if self.bias_trend is None else self.bias_trend.copy(),
                              self._ma)


def default_kernel(lookback):
    return 25 if lookback >= 25 else 0


def init_backbone(lookback, horizon, kernel=None):
    """Every output step starts as the mean of the input, as in DLinear."""
    if kernel is None:
        kernel = default_kernel(lookback)
    w = np.full((horizon, lookback), 1.0 / lookback)
    b = np.zeros(horizon)
    if kernel:
        model = LinearBackbone(w, b, kernel, w.copy(), b.copy())
        model.trend_operator  # validates the kernel
        return model
    return LinearBackbone(w, b)


def _check(model, x):
    if x.shape[-2] != model.lookback:
        raise ValueError(f"window length {x.shape[-2]} does not match model lookback {model.lookback}")


def predict(model, window):
    """Forecast (..., H, C) from (..., L, C)."""
    x = np.asarray(window, dtype=float)
    _check(model, x)
    if not model.decomposed:
        return model.weight @ x + model.bias[:, None]
    trend = model.trend_operator @ x
    rest = x - trend
    return (model.weight @ rest + model.bias[:, None]
            + model.weight_trend @ trend + model.bias_trend[:, None])


def _outer(g, x):
    # sum over batch and channels of g x^T
    g = np.moveaxis(g, -2, 0).reshape(g.shape[-2], -1)
    x = np.moveaxis(x, -2, 0).reshape(x.shape[-2], -1)
    return g @ x.T


def backbone_backward(model, window, grad_out):
    """Returns (dict of parameter gradients, gradient w.r.t. the input)."""
    x = np.asarray(window, dtype=float)
    g = np.asarray(grad_out, dtype=float)
    _check(model, x)
    if g.shape != x.shape[:-2] + (model.horizon, x.shape[-1]):
        raise ValueError(f"gradient shape {g.shape} does not match prediction shape")
    g_bias = g.reshape(-1, model.horizon, g.shape[-1]).sum(axis=(0, 2))
    if not model.decomposed:
        grads = {"weight": _outer(g, x), "bias": g_bias}
        return grads, model.weight.T @ g
    ma = model.trend_operator
    trend = ma @ x
    rest = x - trend
    grads = {
        "weight": _outer(g, rest),
        "bias": g_bias,
        "weight_trend": _outer(g, trend),
        "bias_trend": g_bias.copy(),
    }
    g_rest = model.weight.T @ g
    g_trend = model.weight_trend.T @ g
    g_x = g_rest + ma.T @ (g_trend - g_rest)
    return grads, g_x


def save_backbone(model, path):
    lines = [f"{model.horizon} {model.lookback} {model.kernel}"]
    for a in model.arrays():
        lines += [" ".join(repr(float(v)) for v in row) for row in np.atleast_2d(a)]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_backbone(path):
    with open(path) as fh:
        rows = [ln.split() for ln in fh.read().splitlines() if ln.strip()]
    try:
        h, l, kernel = (int(v) for v in rows[0])
        vals = [np.array([float(v) for v in r]) for r in rows[1:]]
    except (IndexError, ValueError) as err:
        raise FormatError(f"{path}: {err}") from None
    n_blocks = 2 if kernel else 1
    if len(vals) != n_blocks * (h + 1) or any(len(v) != l for v in vals[:h]):
        raise FormatError(f"{path}: inconsistent with header H={h} L={l} kernel={kernel}")
    blocks = []
    for i in range(n_blocks):
        chunk = vals[i * (h + 1):(i + 1) * (h + 1)]
        blocks += [np.vstack(chunk[:h]), chunk[h]]
    return LinearBackbone(*blocks[:2], kernel, *blocks[2:]) if kernel else LinearBackbone(*blocks)
