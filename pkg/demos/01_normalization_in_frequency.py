"""
What z-score normalization does to a spectrum
=============================================

Instance normalization subtracts the mean and divides by the standard
deviation. In the frequency domain that only touches the DC bin and rescales
every other bin by the same factor, so the relative share of any group of
frequencies is unchanged.
"""
import numpy as np

from frednorm import amplitudes, dft, idft_real, normalize
from frednorm.theory import verify_lemma1, verify_theorem1

rng = np.random.default_rng(0)
t = np.arange(96)[:, None]
x = 20 + 3 * np.sin(2 * np.pi * 4 * t / 96) + rng.normal(0, 0.5, (96, 1))

###############################################################################
# Transform, and check we can get the window back.
spec = dft(x)
print("bins:", spec.n_freqs, " round-trip error:", np.abs(idft_real(spec) - x).max())

###############################################################################
# Amplitudes before and after normalization. Apart from k=0 they differ by
# exactly 1/sigma.
z, stats = normalize(x)
a, a_z = amplitudes(dft(x))[:, 0], amplitudes(dft(z))[:, 0]
sigma = stats.std[0, 0]
print("sigma =", sigma)
print("k   |A|        |A_z|*sigma")
for k in [0, 1, 4, 10]:
    print(f"{k:<3} {a[k]:<10.4f} {a_z[k] * sigma:.4f}")

###############################################################################
# The same statement as reusable checks.
print(verify_lemma1(x).to_dict())
print(verify_theorem1(x, 0, subset=[3, 4, 5]).to_dict())
