import numpy as np
import pytest

from frednorm import backbone as bb
from frednorm.stability import FormatError

from oracles import central_difference


def random_model(rng, lookback=12, horizon=5, kernel=0):
    m = bb.init_backbone(lookback, horizon, kernel)
    for a in m.arrays():
        a[...] = rng.normal(size=a.shape)
    return m


def test_zero_weight_constant_forecast(rng):
    m = bb.LinearBackbone(np.zeros((4, 10)), np.array([1.0, 2.0, 3.0, 4.0]))
    out = bb.predict(m, rng.normal(size=(10, 3)))
    np.testing.assert_array_equal(out, np.repeat([[1.0], [2.0], [3.0], [4.0]], 3, axis=1))


def test_identity_map(rng):
    m = bb.LinearBackbone(np.eye(10), np.zeros(10))
    x = rng.normal(size=(10, 3))
    np.testing.assert_array_equal(bb.predict(m, x), x)


def test_matches_dense_multiply(rng):
    m = random_model(rng)
    x = rng.normal(size=(4, 12, 3))
    out = bb.predict(m, x)
    for b in range(4):
        for c in range(3):
            ref = np.array([sum(m.weight[h, l] * x[b, l, c] for l in range(12)) + m.bias[h]
                            for h in range(5)])
            np.testing.assert_allclose(out[b, :, c], ref, rtol=1e-10, atol=1e-12)


def test_moving_average_operator():
    ma = bb.moving_average_matrix(6, 3)
    x = np.array([1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    padded = np.concatenate([[x[0]], x, [x[-1]]])
    ref = np.convolve(padded, np.ones(3) / 3, mode="valid")
    np.testing.assert_allclose(ma @ x, ref)
    np.testing.assert_allclose(ma.sum(axis=1), 1.0)
    for bad in (0, 2, 7):
        with pytest.raises(ValueError):
            bb.moving_average_matrix(6, bad)


def test_decomposed_prediction(rng):
    m = random_model(rng, 12, 5, kernel=5)
    x = rng.normal(size=(12, 2))
    trend = m.trend_operator @ x
    ref = m.weight @ (x - trend) + m.bias[:, None] + m.weight_trend @ trend + m.bias_trend[:, None]
    np.testing.assert_allclose(bb.predict(m, x), ref, rtol=1e-12)


def test_default_kernel():
    assert bb.init_backbone(96, 24).kernel == 25
    assert bb.init_backbone(16, 4).kernel == 0


@pytest.mark.parametrize("kernel", [0, 5])
def test_linear_in_input(rng, kernel):
    m = random_model(rng, kernel=kernel)
    m.bias[:] = 0
    if kernel:
        m.bias_trend[:] = 0
    x1, x2 = rng.normal(size=(2, 12, 2))
    np.testing.assert_allclose(bb.predict(m, 2 * x1 + 3 * x2),
                               2 * bb.predict(m, x1) + 3 * bb.predict(m, x2), rtol=1e-10, atol=1e-12)


def test_zero_grad(rng):
    m = random_model(rng, kernel=5)
    x = rng.normal(size=(12, 2))
    grads, gx = bb.backbone_backward(m, x, np.zeros((5, 2)))
    assert not any(g.any() for g in grads.values()) and not gx.any()


@pytest.mark.parametrize("kernel", [0, 5])
def test_finite_differences(rng, kernel):
    m = random_model(rng, kernel=kernel)
    x = rng.normal(size=(3, 12, 2))
    r = rng.normal(size=(3, 5, 2))
    grads, gx = bb.backbone_backward(m, x, r)
    f = lambda: float(np.sum(bb.predict(m, x) * r))
    assert grads["weight"][2, 3] == pytest.approx(central_difference(f, m.weight, (2, 3)), rel=1e-4)
    for name, arr in zip(m.param_names(), m.arrays()):
        for idx in np.ndindex(arr.shape):
            assert grads[name][idx] == pytest.approx(central_difference(f, arr, idx), rel=1e-4, abs=1e-8)
    for idx in [(0, 0, 0), (1, 7, 1), (2, 11, 0)]:
        assert gx[idx] == pytest.approx(central_difference(f, x, idx), rel=1e-4, abs=1e-8)


def test_input_gradient_is_transpose(rng):
    m = random_model(rng)
    g = rng.normal(size=(5, 2))
    _, gx = bb.backbone_backward(m, rng.normal(size=(12, 2)), g)
    np.testing.assert_allclose(gx, m.weight.T @ g, rtol=1e-12)


def test_shape_errors(rng):
    m = random_model(rng)
    with pytest.raises(ValueError):
        bb.predict(m, np.zeros((11, 2)))
    with pytest.raises(ValueError):
        bb.backbone_backward(m, np.zeros((12, 2)), np.zeros((4, 2)))


@pytest.mark.parametrize("kernel", [0, 5])
def test_checkpoint_round_trip(tmp_path, rng, kernel):
    m = random_model(rng, kernel=kernel)
    p = tmp_path / "bb.txt"
    bb.save_backbone(m, p)
    back = bb.load_backbone(p)
    assert back.kernel == kernel
    for a, b in zip(m.arrays(), back.arrays()):
        np.testing.assert_array_equal(a, b)
    p.write_text("5 12 0\n1 2\n")
    with pytest.raises(FormatError):
        bb.load_backbone(p)
