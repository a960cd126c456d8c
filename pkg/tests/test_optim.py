import numpy as np
import pytest

from cauchynet.complex_linalg import Rng
from cauchynet.data import SplitDataset, scaler_apply, scaler_fit, target_intro_spike
from cauchynet.grad import cauchynet_trainable
from cauchynet.model import init_elliptical
from cauchynet.optim import (AdamState, TrainConfig, Trainable, adam_step,
                             lr_at, train)


class ScalarModel:
    """One-parameter quadratic test problem for the optimizer."""

    def __init__(self, theta=0.0):
        self.theta = theta

    def parameter_vector(self):
        return np.array([self.theta])

    def set_parameter_vector(self, v):
        self.theta = float(v[0])


def test_lr_at_schedule():
    cfg = TrainConfig(lr0=0.01, lr_decay_factor=0.5, lr_decay_every=100)
    assert lr_at(cfg, 0) == pytest.approx(0.01)
    assert lr_at(cfg, 99) == pytest.approx(0.01)
    assert lr_at(cfg, 100) == pytest.approx(0.005)
    assert lr_at(cfg, 250) == pytest.approx(0.0025)


def test_lr_at_non_increasing():
    cfg = TrainConfig(lr0=0.3, lr_decay_factor=0.7, lr_decay_every=3)
    vals = [lr_at(cfg, e) for e in range(50)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_adam_zero_gradient_is_fixed_point():
    m = ScalarModel(1.5)
    st = AdamState.for_size(1)
    adam_step(m, np.zeros(1), st, lr=0.1, weight_decay=0.0)
    assert m.theta == 1.5


def test_adam_first_step_direction_and_size():
    m = ScalarModel(0.0)
    st = AdamState.for_size(1)
    g = np.array([4.0])
    adam_step(m, g, st, lr=0.05)
    # first bias-corrected step is -lr * g/(|g| + eps) up to the tiny eps
    assert m.theta == pytest.approx(-0.05, rel=1e-6)


def test_adam_scalar_convergence():
    # minimize (theta - 3)^2 from 0: 200 steps at lr 0.05 land within 1e-2
    m = ScalarModel(0.0)
    st = AdamState.for_size(1)
    for _ in range(200):
        g = np.array([2.0 * (m.theta - 3.0)])
        adam_step(m, g, st, lr=0.05)
    assert abs(m.theta - 3.0) < 1e-2


def test_adam_weight_decay_pulls_toward_zero():
    m = ScalarModel(2.0)
    st = AdamState.for_size(1)
    adam_step(m, np.zeros(1), st, lr=0.1, weight_decay=0.01)
    assert 0.0 < m.theta < 2.0


def spike_dataset(n=120, seed=3):
    xs = np.linspace(-1, 1, n)
    ys = target_intro_spike(xs)
    rng = Rng(seed)
    idx = rng.permutation(n)
    tr, va = idx[: int(0.8 * n)], idx[int(0.8 * n):]
    st = scaler_fit(ys[tr])
    return SplitDataset(xs[tr][:, None], scaler_apply(ys[tr], st),
                        xs[va][:, None], scaler_apply(ys[va], st),
                        xs[va][:, None], scaler_apply(ys[va], st), m=1)


def test_train_rejects_zero_epochs():
    ds = spike_dataset()
    model = init_elliptical(16, 1, Rng(1), 1.05, 0.1)
    with pytest.raises(ValueError):
        train(cauchynet_trainable(model), ds, TrainConfig(epochs=0, seed=1))


def test_train_improves_loss_by_10x():
    ds = spike_dataset()
    model = init_elliptical(64, 1, Rng(10), 1.05, 0.1)
    cfg = TrainConfig(epochs=120, lr0=0.01, weight_decay=0.0, lam=0.1, seed=10)
    log = train(cauchynet_trainable(model), ds, cfg)
    assert log.entries[-1].train_loss < log.entries[0].train_loss / 10.0


def test_train_is_deterministic_for_fixed_seed():
    cfg = TrainConfig(epochs=15, lr0=0.01, seed=42)
    logs = []
    for _ in range(2):
        ds = spike_dataset()
        model = init_elliptical(16, 1, Rng(7), 1.05, 0.1)
        logs.append(train(cauchynet_trainable(model), ds, cfg))
    a, b = logs
    assert [(r.epoch, r.lr, r.train_loss, r.val_loss) for r in a.entries] == \
           [(r.epoch, r.lr, r.train_loss, r.val_loss) for r in b.entries]


def test_trainlog_csv_round_trip(tmp_path):
    ds = spike_dataset()
    model = init_elliptical(8, 1, Rng(2), 1.05, 0.1)
    log = train(cauchynet_trainable(model), ds, TrainConfig(epochs=3, seed=2))
    with_wall = tmp_path / "log_wall.csv"
    without = tmp_path / "log.csv"
    log.write_csv(with_wall, include_wall=True)
    log.write_csv(without, include_wall=False)
    head_wall = with_wall.read_text().splitlines()[0]
    head = without.read_text().splitlines()[0]
    assert head_wall == "epoch,lr,train_loss,val_loss,wall_ms"
    assert head == "epoch,lr,train_loss,val_loss"
    assert len(without.read_text().splitlines()) == 4


def test_epoch_callback_sees_every_epoch():
    ds = spike_dataset()
    model = init_elliptical(8, 1, Rng(2), 1.05, 0.1)
    seen = []
    train(cauchynet_trainable(model), ds, TrainConfig(epochs=5, seed=2),
          epoch_callback=lambda e, m: seen.append(e))
    assert seen == [0, 1, 2, 3, 4]


def test_train_divergence_reports_epoch_and_partial_log():
    from cauchynet.errors import NonFiniteError
    from cauchynet.model import CauchyNetModel
    ds = spike_dataset()
    # output coefficient at the float ceiling overflows the first forward
    model = CauchyNetModel(1, 1, 0.0, np.array([[1j]]), np.array([1e308 + 0j]))
    with pytest.raises(NonFiniteError) as exc:
        train(cauchynet_trainable(model), ds, TrainConfig(epochs=3, seed=1))
    assert exc.value.epoch == 0
    assert exc.value.partial_log is not None
    assert exc.value.partial_log.entries == []


def test_imag_error_shrinks_with_penalty():
    ds = spike_dataset()
    model = init_elliptical(64, 1, Rng(10), 1.05, 0.1)
    trainable = cauchynet_trainable(model)
    _, e0 = trainable.predict(model, ds.val_x)
    start = np.abs(e0).mean()
    train(trainable, ds, TrainConfig(epochs=120, lr0=0.01, weight_decay=0.0,
                                     lam=0.1, seed=10))
    _, e1 = trainable.predict(model, ds.val_x)
    assert np.abs(e1).mean() < start
