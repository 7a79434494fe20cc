"""Real-input DFT / inverse DFT on multichannel windows.

Windows are arrays whose last two axes are (time, channel); any leading axes
are treated as a batch. The half spectrum has K = L // 2 + 1 rows.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Spectrum:
    real: np.ndarray
    imag: np.ndarray
    length: int

    @property
    def n_freqs(self):
        return self.real.shape[-2]

    def as_complex(self):
        return self.real + 1j * self.imag


def n_freqs(length):
    return length // 2 + 1


def _check_finite(a, what):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite values")


def multiplicity(length):
    """Weight of each half-spectrum bin in the full spectrum (1 or 2)."""
    m = np.full(n_freqs(length), 2.0)
    m[0] = 1.0
    if length % 2 == 0:
        m[-1] = 1.0
    return m


def dft(window):
    """Half-spectrum DFT along the time axis.

    ``F(k, c) = sum_t x(t, c) * exp(-2j*pi*k*t/L)`` for ``k = 0 .. L//2``.
    """
    x = np.asarray(window, dtype=float)
    if x.ndim < 2:
        raise ValueError("window must have shape (..., L, C)")
    if x.shape[-2] < 2:
        raise ValueError("window needs at least two time steps")
    _check_finite(x, "window")
    f = np.fft.rfft(x, axis=-2)
    return Spectrum(f.real.copy(), f.imag.copy(), x.shape[-2])


def idft_real(spectrum):
    """Real part of the inverse transform of a (possibly non-Hermitian) half spectrum.

    Computes ``(1/L) * sum_k m(k) * (Fr cos(2 pi k l / L) - Fi sin(2 pi k l / L))``,
    which is what taking ``.real`` of the full inverse DFT gives after
    conjugate-symmetric extension. Imaginary parts of the DC and Nyquist bins
    have no effect.
    """
    length = spectrum.length
    if length < 2:
        raise ValueError("source length must be at least 2")
    if spectrum.real.shape != spectrum.imag.shape:
        raise ValueError("real and imaginary parts differ in shape")
    if spectrum.real.shape[-2] != n_freqs(length):
        raise ValueError(
            f"spectrum has {spectrum.real.shape[-2]} rows, expected {n_freqs(length)}"
        )
    _check_finite(spectrum.real, "spectrum")
    _check_finite(spectrum.imag, "spectrum")
    return np.fft.irfft(spectrum.as_complex(), n=length, axis=-2)


def amplitudes(spectrum):
    return np.hypot(spectrum.real, spectrum.imag)


# adjoints, used by the hand-written backward passes

def dft_adjoint(grad_real, grad_imag, length):
    """Gradient w.r.t. the window given gradients w.r.t. (real, imag) of ``dft``."""
    m = multiplicity(length)[:, None]
    g = (grad_real + 1j * grad_imag) / m
    return length * np.fft.irfft(g, n=length, axis=-2)


def idft_real_adjoint(grad_out):
    """Gradients w.r.t. (real, imag) of ``idft_real`` given the output gradient."""
    length = grad_out.shape[-2]
    m = multiplicity(length)[:, None] / length
    g = np.fft.rfft(grad_out, axis=-2)
    gr = m * g.real
    gi = m * g.imag
    # DC and Nyquist imaginary parts never reach the output
    gi[..., 0, :] = 0.0
    if length % 2 == 0:
        gi[..., -1, :] = 0.0
    return gr, gi
