"""Adam over flat real parameter vectors, the LR schedule, and the trainer.

Both network types train through the same loop; a `Trainable` bundles the
model with its batch-gradient and prediction callables, and the optimizer
only ever sees flat float64 vectors.  All shuffling derives from the config
seed, so a run is reproducible end to end.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .complex_linalg import Rng, derive_seed
from .errors import NonFiniteError

_SHUFFLE_STREAM = 0x5A


@dataclass
class AdamState:
    m1: np.ndarray
    m2: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps_adam: float = 1e-8

    @classmethod
    def for_size(cls, n: int) -> "AdamState":
        return cls(np.zeros(n), np.zeros(n))


@dataclass
class TrainConfig:
    epochs: int = 200
    batch_size: int = 32
    lr0: float = 0.01
    lr_decay_factor: float = 0.5
    lr_decay_every: int = 100
    weight_decay: float = 1e-4
    lam: float = 0.1          # imaginary-error penalty weight
    seed: int = 10

    def validate(self) -> list[str]:
        problems = []
        if self.epochs < 1:
            problems.append("epochs must be at least 1")
        if self.batch_size < 1:
            problems.append("batch_size must be at least 1")
        if self.lr0 <= 0:
            problems.append("lr0 must be positive")
        if not (0 < self.lr_decay_factor <= 1):
            problems.append("lr_decay_factor must be in (0, 1]")
        if self.lr_decay_every < 1:
            problems.append("lr_decay_every must be at least 1")
        if self.weight_decay < 0:
            problems.append("weight_decay must be nonnegative")
        if self.lam < 0:
            problems.append("lam must be nonnegative")
        return problems


@dataclass
class TrainLogEntry:
    epoch: int
    lr: float
    train_loss: float
    val_loss: float
    wall_ms: float


@dataclass
class TrainLog:
    entries: list[TrainLogEntry] = field(default_factory=list)

    def write_csv(self, path, include_wall: bool = True) -> None:
        """epoch,lr,train_loss,val_loss[,wall_ms] rows.

        wall_ms is the only nondeterministic column; callers that need
        byte-reproducible files pass include_wall=False.
        """
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            header = ["epoch", "lr", "train_loss", "val_loss"]
            if include_wall:
                header.append("wall_ms")
            w.writerow(header)
            for r in self.entries:
                row = [r.epoch, repr(r.lr), repr(r.train_loss), repr(r.val_loss)]
                if include_wall:
                    row.append(repr(r.wall_ms))
                w.writerow(row)

    def final(self) -> TrainLogEntry:
        return self.entries[-1]


@dataclass
class Trainable:
    """A model plus the callables the trainer needs.

    batch_gradient(model, X, y, lam) -> (LossValue, flat gradient vector)
    predict(model, X)                -> (y array, e array)
    """
    model: object
    batch_gradient: Callable
    predict: Callable


def lr_at(config: TrainConfig, epoch: int) -> float:
    """lr0 * factor^(epoch // decay_every)."""
    if epoch < 0:
        raise ValueError("epoch must be nonnegative")
    return config.lr0 * config.lr_decay_factor ** (epoch // config.lr_decay_every)


def adam_step(model, grad_vec: np.ndarray, state: AdamState, lr: float,
              weight_decay: float = 0.0) -> None:
    """One Adam update with bias correction, mutating model and state.

    Weight decay couples as classic L2: it is added to the raw gradient
    before the moment updates.
    """
    p = model.parameter_vector()
    g = np.asarray(grad_vec, dtype=float)
    if g.shape != p.shape:
        raise ValueError("gradient and parameter vectors differ in shape")
    if weight_decay:
        g = g + weight_decay * p
    state.t += 1
    state.m1 = state.beta1 * state.m1 + (1 - state.beta1) * g
    state.m2 = state.beta2 * state.m2 + (1 - state.beta2) * g * g
    m_hat = state.m1 / (1 - state.beta1 ** state.t)
    v_hat = state.m2 / (1 - state.beta2 ** state.t)
    p = p - lr * m_hat / (np.sqrt(v_hat) + state.eps_adam)
    if not np.all(np.isfinite(p)):
        raise NonFiniteError("parameter update is non-finite")
    model.set_parameter_vector(p)


def train(trainable: Trainable, dataset, config: TrainConfig,
          epoch_callback: Optional[Callable] = None) -> TrainLog:
    """Shuffled minibatch Adam on the mean batch loss.

    Per-epoch shuffle order comes from a child seed of (config.seed, epoch),
    so evaluation callbacks cannot perturb the trajectory.  Raises
    NonFiniteError with the failing epoch and the partial log if the run
    diverges.  epoch_callback(epoch, model) runs after each epoch.
    """
    problems = config.validate()
    if problems:
        raise ValueError("; ".join(problems))
    n = len(dataset.train_y)
    if n < 1 or len(dataset.val_y) < 1:
        raise ValueError("train and val splits must be nonempty")

    model = trainable.model
    state = AdamState.for_size(len(model.parameter_vector()))
    log = TrainLog()
    for epoch in range(config.epochs):
        t0 = time.perf_counter()
        lr = lr_at(config, epoch)
        order = Rng(derive_seed(config.seed, _SHUFFLE_STREAM, epoch)).permutation(n)
        batch_losses = []
        try:
            for start in range(0, n, config.batch_size):
                idx = order[start:start + config.batch_size]
                lv, gvec = trainable.batch_gradient(
                    model, dataset.train_x[idx], dataset.train_y[idx], config.lam)
                adam_step(model, gvec, state, lr, config.weight_decay)
                batch_losses.append(lv.total)
            yv, ev = trainable.predict(model, dataset.val_x)
            val_loss = float(((yv - dataset.val_y) ** 2).mean()
                             + config.lam * (ev ** 2).mean())
        except NonFiniteError as exc:
            raise NonFiniteError(f"training diverged at epoch {epoch}: {exc}",
                                 epoch=epoch, partial_log=log) from None
        wall_ms = (time.perf_counter() - t0) * 1e3
        log.entries.append(TrainLogEntry(epoch, lr, float(np.mean(batch_losses)),
                                         val_loss, wall_ms))
        if epoch_callback is not None:
            epoch_callback(epoch, model)
    return log
