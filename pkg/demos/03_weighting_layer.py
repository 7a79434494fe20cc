"""
The weighting layer and its gradients
=====================================

The layer differences the window, moves to the frequency domain, scales the
real and imaginary parts of bin k by ``S(k, c) * w(k) + b(k)`` and moves back.
Its default initialisation is a pass-through on the differenced window.
"""
import numpy as np

from frednorm import (LowPass, RandomSelect, apply_filter, backward, diff1, forward,
                      init_params)

rng = np.random.default_rng(0)
x = rng.normal(size=(32, 2))
scores = rng.uniform(0, 20, size=(17, 2))

params = init_params(17)
out, tape = forward(params, scores, x)
print("identity start:", np.allclose(out, diff1(x)))

###############################################################################
# Let the stability score drive the weights (w=1, b=0): bins with a high
# score are amplified.
params = init_params(17, "unit-w")
out, tape = forward(params, scores, x)
print("output shape:", out.shape)

###############################################################################
# Exact gradients of a scalar loss, checked against a finite difference.
r = rng.normal(size=out.shape)
grads, grad_x = backward(params, tape, r)
p = params.copy()
h = 1e-5
p.w_r[3] += h
up = np.sum(forward(p, scores, x)[0] * r)
p.w_r[3] -= 2 * h
down = np.sum(forward(p, scores, x)[0] * r)
print("d/dw_r[3]: analytic", grads.w_r[3], " numeric", (up - down) / (2 * h))

###############################################################################
# The two fixed filters used in the ablation.
lp = apply_filter(LowPass(4), None, None, x)
rs = apply_filter(RandomSelect(4, seed=1), None, None, x)
print("low-pass / random-select output std:", lp.std(), rs.std())
