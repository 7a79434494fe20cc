"""Frequency stability weighting layer.

Pipeline per channel: first difference -> half-spectrum DFT -> scale real and
imaginary parts by ``S * w + b`` (per bin, shared across channels) -> real
inverse DFT. Every stage is linear in the input, so the backward pass is a
chain of adjoints.
"""
from dataclasses import dataclass

import numpy as np

from .spectral import Spectrum, dft, dft_adjoint, idft_real, idft_real_adjoint, n_freqs
from .stability import FormatError


@dataclass(eq=False)
class FredNormerParams:
    w_r: np.ndarray
    b_r: np.ndarray
    w_i: np.ndarray
    b_i: np.ndarray

    names = ("w_r", "b_r", "w_i", "b_i")

    @property
    def n_freqs(self):
        return len(self.w_r)

    def arrays(self):
        return [getattr(self, n) for n in self.names]

    def copy(self):
        return FredNormerParams(*(a.copy() for a in self.arrays()))

    def validate(self, k=None):
        for name, a in zip(self.names, self.arrays()):
            if a.ndim != 1 or (k is not None and len(a) != k):
                raise ValueError(f"{name} must be a vector of length {k}")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"{name} contains non-finite values")


def init_params(k, scheme="identity"):
    """``identity``: w=0, b=1 (pass-through modulation). ``unit-w``: w=1, b=0."""
    if k < 1:
        raise ValueError("k must be positive")
    if scheme == "identity":
        w, b = 0.0, 1.0
    elif scheme == "unit-w":
        w, b = 1.0, 0.0
    else:
        raise ValueError(f"unknown init scheme {scheme!r}")
    return FredNormerParams(np.full(k, w), np.full(k, b), np.full(k, w), np.full(k, b))


def diff1(window):
    """Length-preserving first difference with a leading zero."""
    x = np.asarray(window, dtype=float)
    if x.shape[-2] < 2:
        raise ValueError("differencing needs at least two time steps")
    d = np.zeros_like(x)
    d[..., 1:, :] = x[..., 1:, :] - x[..., :-1, :]
    return d


def diff1_adjoint(grad):
    g = np.zeros_like(grad)
    g[..., 1:, :] = grad[..., 1:, :]
    g[..., :-1, :] -= grad[..., 1:, :]
    return g


def _as_scores(measure):
    return np.asarray(getattr(measure, "scores", measure), dtype=float)


def effective_weights(params, scores):
    """(K, C) real and imaginary branch weights ``S * w + b``."""
    er = scores * params.w_r[:, None] + params.b_r[:, None]
    ei = scores * params.w_i[:, None] + params.b_i[:, None]
    return er, ei


@dataclass
class ForwardTape:
    spectrum: Spectrum
    scores: np.ndarray
    eff_real: np.ndarray
    eff_imag: np.ndarray
    shape: tuple


def modulate(window, eff_real, eff_imag):
    """diff1 -> DFT -> multiply by fixed per-bin weights -> inverse DFT."""
    spec = dft(diff1(window))
    out = idft_real(Spectrum(spec.real * eff_real, spec.imag * eff_imag, spec.length))
    return out, spec


def forward(params, measure, window):
    x = np.asarray(window, dtype=float)
    scores = _as_scores(measure)
    k = n_freqs(x.shape[-2])
    if scores.shape != (k, x.shape[-1]):
        raise ValueError(f"stability scores have shape {scores.shape}, expected {(k, x.shape[-1])}")
    params.validate(k)
    er, ei = effective_weights(params, scores)
    out, spec = modulate(x, er, ei)
    return out, ForwardTape(spec, scores, er, ei, x.shape)


def backward(params, tape, grad_out):
    """Gradients of the forward map w.r.t. the four parameter vectors and the input."""
    g = np.asarray(grad_out, dtype=float)
    if g.shape != tape.shape:
        raise ValueError(f"gradient shape {g.shape} does not match forward output {tape.shape}")
    g_fr, g_fi = idft_real_adjoint(g)
    spec = tape.spectrum
    # products d(out)/d(eff) summed over batch and channels
    pr = g_fr * spec.real
    pi = g_fi * spec.imag
    batch_axes = tuple(range(pr.ndim - 2))
    pr_kc = pr.sum(axis=batch_axes)
    pi_kc = pi.sum(axis=batch_axes)
    grads = FredNormerParams(
        w_r=(pr_kc * tape.scores).sum(axis=1),
        b_r=pr_kc.sum(axis=1),
        w_i=(pi_kc * tape.scores).sum(axis=1),
        b_i=pi_kc.sum(axis=1),
    )
    g_x = dft_adjoint(g_fr * tape.eff_real, g_fi * tape.eff_imag, spec.length)
    return grads, diff1_adjoint(g_x)


# ablation filters -----------------------------------------------------------

@dataclass(frozen=True)
class StabilityWeighting:
    pass


@dataclass(frozen=True)
class LowPass:
    cutoff: int


@dataclass(frozen=True)
class RandomSelect:
    m: int
    seed: int = 0


def filter_mask(kind, k):
    """Fixed 0/1 per-bin weight for the non-learnable filters."""
    mask = np.zeros(k)
    if isinstance(kind, LowPass):
        if not 1 <= kind.cutoff <= k - 1:
            raise ValueError(f"cutoff must lie in [1, {k - 1}], got {kind.cutoff}")
        mask[:kind.cutoff + 1] = 1.0
    elif isinstance(kind, RandomSelect):
        if not 1 <= kind.m <= k - 1:
            raise ValueError(f"m must lie in [1, {k - 1}], got {kind.m}")
        rng = np.random.default_rng(kind.seed)
        mask[rng.choice(np.arange(1, k), size=kind.m, replace=False)] = 1.0
    else:
        raise ValueError(f"{kind!r} has no fixed mask")
    return mask


def apply_filter(kind, measure, params, window):
    if isinstance(kind, StabilityWeighting):
        return forward(params, measure, window)[0]
    x = np.asarray(window, dtype=float)
    mask = filter_mask(kind, n_freqs(x.shape[-2]))[:, None]
    return modulate(x, mask, mask)[0]


def parse_filter(text):
    """'stability', 'lowpass:<cutoff>' or 'random:<m>[:<seed>]'."""
    name, _, rest = text.partition(":")
    args = [int(a) for a in rest.split(":")] if rest else []
    if name == "stability" and not args:
        return StabilityWeighting()
    if name == "lowpass" and len(args) == 1:
        return LowPass(args[0])
    if name == "random" and len(args) in (1, 2):
        return RandomSelect(*args)
    raise ValueError(f"cannot parse filter spec {text!r}")


def format_filter(kind):
    if isinstance(kind, LowPass):
        return f"lowpass:{kind.cutoff}"
    if isinstance(kind, RandomSelect):
        return f"random:{kind.m}:{kind.seed}"
    return "stability"


# checkpoint ---------------------------------------------------------------

def save_params(params, path):
    lines = [str(params.n_freqs)]
    lines += [" ".join(repr(float(v)) for v in a) for a in params.arrays()]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_params(path):
    with open(path) as fh:
        lines = [ln.split() for ln in fh.read().splitlines() if ln.strip()]
    try:
        k = int(lines[0][0])
        vecs = [np.array([float(v) for v in ln]) for ln in lines[1:]]
    except (IndexError, ValueError) as err:
        raise FormatError(f"{path}: {err}") from None
    if len(vecs) != 4 or any(len(v) != k for v in vecs):
        raise FormatError(f"{path}: expected four vectors of length {k}")
    return FredNormerParams(*vecs)
