import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from frednorm.spectral import Spectrum, amplitudes, dft, idft_real, multiplicity, n_freqs

from oracles import naive_dft, naive_idft_real


def test_constant_window_only_dc():
    s = dft(np.full((4, 1), 3.0))
    np.testing.assert_allclose(s.real[:, 0], [12, 0, 0], atol=1e-12)
    np.testing.assert_allclose(s.imag[:, 0], [0, 0, 0], atol=1e-12)


def test_cosine_lands_in_bin_one():
    s = dft(np.array([[1.0], [0.0], [-1.0], [0.0]]))
    np.testing.assert_allclose(s.real[:, 0], [0, 2, 0], atol=1e-12)
    np.testing.assert_allclose(s.imag[:, 0], [0, 0, 0], atol=1e-12)


def test_matches_naive_sum_64(rng):
    x = rng.normal(size=(64, 3))
    s = dft(x)
    re, im = naive_dft(x)
    scale = np.abs(re + 1j * im).max()
    np.testing.assert_allclose(s.real, re, rtol=0, atol=1e-10 * scale)
    np.testing.assert_allclose(s.imag, im, rtol=0, atol=1e-10 * scale)


@pytest.mark.parametrize("length", [2, 3, 5, 8, 17, 32, 33])
def test_matches_naive_sum_lengths(rng, length):
    x = rng.normal(size=(length, 2))
    s = dft(x)
    re, im = naive_dft(x)
    assert s.real.shape == (n_freqs(length), 2)
    np.testing.assert_allclose(s.real, re, atol=1e-10 * np.abs(re).max())
    np.testing.assert_allclose(s.imag, im, atol=1e-10 * max(np.abs(im).max(), 1))


def test_batch_axis_is_independent(rng):
    x = rng.normal(size=(5, 16, 2))
    s = dft(x)
    for b in range(5):
        np.testing.assert_allclose(s.real[b], dft(x[b]).real)


def test_rejects_non_finite():
    x = np.zeros((8, 1))
    x[3] = np.nan
    with pytest.raises(ValueError):
        dft(x)
    with pytest.raises(ValueError):
        dft(np.zeros((1, 1)))


def test_round_trip(rng):
    x = rng.normal(size=(31, 2))
    np.testing.assert_allclose(idft_real(dft(x)), x, atol=1e-12)


def test_dc_inversion():
    length, a = 10, 2.5
    re = np.zeros((n_freqs(length), 2))
    re[0] = length * a
    out = idft_real(Spectrum(re, np.zeros_like(re), length))
    np.testing.assert_allclose(out, a)


@pytest.mark.parametrize("length", [4, 7, 16, 25])
def test_non_hermitian_matches_naive_inverse(rng, length):
    k = n_freqs(length)
    re, im = rng.normal(size=(k, 3)), rng.normal(size=(k, 3))
    out = idft_real(Spectrum(re, im, length))
    ref = naive_idft_real(re, im, length)
    np.testing.assert_allclose(out, ref, atol=1e-12 * np.abs(ref).max())


def test_idft_validation():
    with pytest.raises(ValueError):
        idft_real(Spectrum(np.zeros((3, 1)), np.zeros((3, 1)), 1))
    with pytest.raises(ValueError):
        idft_real(Spectrum(np.zeros((3, 1)), np.zeros((3, 1)), 8))
    with pytest.raises(ValueError):
        idft_real(Spectrum(np.full((3, 1), np.inf), np.zeros((3, 1)), 4))


def test_amplitudes():
    s = Spectrum(np.array([[3.0]]), np.array([[4.0]]), 1)
    assert amplitudes(s)[0, 0] == 5.0
    z = Spectrum(np.zeros((5, 2)), np.zeros((5, 2)), 8)
    assert not amplitudes(z).any()


def test_amplitudes_per_entry(rng):
    re, im = rng.normal(size=(9, 4)), rng.normal(size=(9, 4))
    a = amplitudes(Spectrum(re, im, 16))
    for k in range(9):
        for c in range(4):
            assert a[k, c] == pytest.approx((re[k, c] ** 2 + im[k, c] ** 2) ** 0.5, rel=1e-14)


windows = st.integers(2, 64).flatmap(
    lambda n: arrays(float, (n, 2), elements=st.floats(-1e3, 1e3, allow_nan=False)))


@settings(max_examples=60, deadline=None)
@given(windows)
def test_round_trip_property(x):
    err = np.abs(idft_real(dft(x)) - x).max()
    assert err <= 1e-9 * max(np.abs(x).max(), 1e-300)


@settings(max_examples=60, deadline=None)
@given(windows, st.floats(-10, 10), st.floats(-10, 10), st.integers(0, 2 ** 32 - 1))
def test_linearity_property(x, a, b, seed):
    y = np.random.default_rng(seed).normal(size=x.shape)
    lhs = dft(a * x + b * y)
    rx, ry = dft(x), dft(y)
    scale = max(np.abs(a * x).max() + np.abs(b * y).max(), 1e-12) * len(x)
    np.testing.assert_allclose(lhs.real, a * rx.real + b * ry.real, atol=1e-10 * scale)
    np.testing.assert_allclose(lhs.imag, a * rx.imag + b * ry.imag, atol=1e-10 * scale)


@settings(max_examples=60, deadline=None)
@given(windows)
def test_parseval_property(x):
    length = len(x)
    energy = (x ** 2).sum(axis=0)
    spec = (multiplicity(length)[:, None] * amplitudes(dft(x)) ** 2).sum(axis=0) / length
    np.testing.assert_allclose(spec, energy, rtol=1e-8, atol=1e-8 * max(energy.max(), 1e-300))
