import numpy as np
import pytest

from cauchynet.complex_linalg import Rng
from cauchynet.baseline import (MlpModel, init_mlp, load_mlp_checkpoint,
                                mlp_backward, mlp_batch_gradient, mlp_forward,
                                mlp_parameter_count, mlp_predict,
                                save_mlp_checkpoint)
from cauchynet.data import ScalerState
from cauchynet.errors import SchemaError


def test_forward_zero_weights():
    model = MlpModel(np.zeros((4, 2)), np.zeros(4), np.zeros(4), 0.0)
    assert mlp_forward(model, [1.0, -2.0]) == 0.0


def test_forward_relu_clamps():
    model = MlpModel(np.array([[1.0]]), np.zeros(1), np.array([1.0]), 0.0)
    assert mlp_forward(model, [-3.0]) == 0.0
    assert mlp_forward(model, [2.0]) == 2.0


def test_parameter_count():
    model = init_mlp(128, 1, Rng(0))
    assert mlp_parameter_count(model) == 128 * 3 + 1
    assert mlp_parameter_count(model) == len(model.parameter_vector())


def test_backward_zero_residual():
    model = init_mlp(5, 2, Rng(3))
    x = np.array([0.4, -0.7])
    y = mlp_forward(model, x)
    dW1, db1, dW2, db2 = mlp_backward(model, x, y)
    assert np.all(dW1 == 0) and np.all(db1 == 0)
    assert np.all(dW2 == 0) and db2 == 0


def test_backward_inactive_unit_gets_zero_gradient():
    model = MlpModel(np.array([[1.0], [1.0]]), np.array([0.0, -10.0]),
                     np.array([1.0, 1.0]), 0.0)
    dW1, db1, _, _ = mlp_backward(model, [2.0], 0.0)
    assert dW1[1, 0] == 0.0 and db1[1] == 0.0
    assert dW1[0, 0] != 0.0


def test_backward_matches_finite_differences():
    rng = Rng(77)
    for _ in range(100):
        h = 1 + rng.randint(6)
        m = 1 + rng.randint(3)
        model = init_mlp(h, m, rng)
        model.b1 = np.array([rng.normal(0.5) for _ in range(h)])
        model.b2 = rng.normal(0.5)
        x = np.array([rng.uniform_in(-1, 1) for _ in range(m)])
        y_true = rng.uniform_in(-2, 2)
        _, g = mlp_batch_gradient(model, x[None, :], np.array([y_true]))
        p0 = model.parameter_vector()
        step = 1e-6
        fd = np.empty_like(p0)
        for j in range(len(p0)):
            for sgn, slot in ((1, 0), (-1, 1)):
                p = p0.copy()
                p[j] += sgn * step
                model.set_parameter_vector(p)
                yv, _ = mlp_predict(model, x[None, :])
                val = (yv[0] - y_true) ** 2
                if slot == 0:
                    up = val
                else:
                    fd[j] = (up - val) / (2 * step)
        model.set_parameter_vector(p0)
        rel = np.abs(g - fd) / np.maximum(np.maximum(np.abs(g), np.abs(fd)), 1e-4)
        assert rel.max() < 1e-5


def test_forward_piecewise_linear():
    # second differences vanish along a segment with a fixed activation sign
    model = init_mlp(8, 1, Rng(5))
    xs = np.linspace(2.0, 2.1, 9)   # narrow segment, pattern very likely fixed
    pre = xs[:, None] * model.W1[:, 0][None, :] + model.b1[None, :]
    assert np.all(np.sign(pre[0]) == np.sign(pre))
    ys, _ = mlp_predict(model, xs)
    second = ys[:-2] - 2 * ys[1:-1] + ys[2:]
    assert np.abs(second).max() < 1e-9


def test_batch_gradient_scales_like_mean():
    model = init_mlp(4, 1, Rng(11))
    X = np.array([[0.1], [0.5], [-0.3]])
    y = np.array([1.0, 0.0, 2.0])
    _, g_all = mlp_batch_gradient(model, X, y)
    gs = [mlp_batch_gradient(model, X[i:i + 1], y[i:i + 1])[1] for i in range(3)]
    np.testing.assert_allclose(g_all, np.mean(gs, axis=0), rtol=1e-12)


def test_checkpoint_round_trip(tmp_path):
    model = init_mlp(6, 2, Rng(8))
    path = tmp_path / "mlp.json"
    save_mlp_checkpoint(model, ScalerState(0, 1, 0, 1), path, seed=10)
    loaded, scaler = load_mlp_checkpoint(path)
    np.testing.assert_array_equal(loaded.W1, model.W1)
    np.testing.assert_array_equal(loaded.W2, model.W2)
    np.testing.assert_array_equal(loaded.b1, model.b1)
    assert loaded.b2 == model.b2
    assert scaler.max == 1


def test_checkpoint_wrong_type_rejected(tmp_path):
    import json
    path = tmp_path / "mlp.json"
    path.write_text(json.dumps({"version": 1, "model_type": "other"}))
    with pytest.raises(SchemaError):
        load_mlp_checkpoint(path)
