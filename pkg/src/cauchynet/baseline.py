"""Real-valued single-hidden-layer ReLU network trained by the shared loop.

Serves as the reference point for the spike-approximation comparison: same
hidden width, same optimizer budget, standard backprop.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .complex_linalg import Rng
from .data import ScalerState
from .errors import NonFiniteError, SchemaError
from .grad import LossValue
from .optim import Trainable

MLP_CHECKPOINT_VERSION = 1


@dataclass
class MlpModel:
    W1: np.ndarray   # (h, m)
    b1: np.ndarray   # (h,)
    W2: np.ndarray   # (h,)
    b2: float

    def __post_init__(self):
        self.W1 = np.asarray(self.W1, dtype=float)
        self.b1 = np.asarray(self.b1, dtype=float)
        self.W2 = np.asarray(self.W2, dtype=float)
        h, m = self.W1.shape
        if self.b1.shape != (h,) or self.W2.shape != (h,):
            raise ValueError("inconsistent MLP shapes")

    @property
    def h(self) -> int:
        return self.W1.shape[0]

    @property
    def m(self) -> int:
        return self.W1.shape[1]

    def parameter_vector(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.W2, [self.b2]])

    def set_parameter_vector(self, v: np.ndarray) -> None:
        h, m = self.h, self.m
        v = np.asarray(v, dtype=float)
        self.W1 = v[:h * m].reshape(h, m)
        self.b1 = v[h * m:h * m + h]
        self.W2 = v[h * m + h:h * m + 2 * h]
        self.b2 = float(v[-1])


def init_mlp(h: int, m: int, rng: Rng) -> MlpModel:
    """Kaiming-style normals for the weights, zero biases."""
    s1 = math.sqrt(2.0 / m)
    s2 = math.sqrt(2.0 / h)
    W1 = np.array([[rng.normal(s1) for _ in range(m)] for _ in range(h)])
    W2 = np.array([rng.normal(s2) for _ in range(h)])
    return MlpModel(W1, np.zeros(h), W2, 0.0)


def mlp_parameter_count(model: MlpModel) -> int:
    return model.h * (model.m + 2) + 1


def mlp_forward(model: MlpModel, x) -> float:
    """W2 . relu(W1 x + b1) + b2 for a single input vector."""
    x = np.asarray(x, dtype=float).reshape(-1)
    pre = model.W1 @ x + model.b1
    return float(model.W2 @ np.maximum(pre, 0.0) + model.b2)


def mlp_predict(model: MlpModel, X):
    """Batch prediction; the imaginary channel is identically zero."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    pre = X @ model.W1.T + model.b1
    y = np.maximum(pre, 0.0) @ model.W2 + model.b2
    return y, np.zeros_like(y)


def mlp_backward(model: MlpModel, x, y_true: float):
    """Exact partials of (y - y_true)^2; ReLU subgradient at 0 is 0.

    Returns (dW1, db1, dW2, db2) matching the model arrays.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    pre = model.W1 @ x + model.b1
    z = np.maximum(pre, 0.0)
    y = float(model.W2 @ z + model.b2)
    r = 2.0 * (y - y_true)
    dW2 = r * z
    db2 = r
    dpre = r * model.W2 * (pre > 0)
    dW1 = np.outer(dpre, x)
    db1 = dpre
    return dW1, db1, dW2, db2


def mlp_batch_gradient(model: MlpModel, X, y_true, lam: float = 0.0):
    """Mean squared-error loss and flat gradient over a batch.

    lam is accepted for trainer compatibility; the output has no imaginary
    part to penalize.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y_true = np.asarray(y_true, dtype=float)
    n = len(X)
    pre = X @ model.W1.T + model.b1
    z = np.maximum(pre, 0.0)
    y = z @ model.W2 + model.b2
    r = 2.0 * (y - y_true) / n
    dW2 = r @ z
    db2 = float(r.sum())
    dpre = r[:, None] * model.W2[None, :] * (pre > 0)
    dW1 = dpre.T @ X
    db1 = dpre.sum(axis=0)
    g = np.concatenate([dW1.ravel(), db1, dW2, [db2]])
    if not np.all(np.isfinite(g)):
        raise NonFiniteError("baseline gradient overflowed")
    fit = float(((y - y_true) ** 2).mean())
    return LossValue(fit, fit, 0.0), g


def mlp_trainable(model: MlpModel) -> Trainable:
    return Trainable(model=model, batch_gradient=mlp_batch_gradient,
                     predict=mlp_predict)


def save_mlp_checkpoint(model: MlpModel, scaler: ScalerState, path,
                        seed: int = 0) -> None:
    doc = {
        "version": MLP_CHECKPOINT_VERSION,
        "model_type": "relu_mlp",
        "h": model.h,
        "m": model.m,
        "W1": model.W1.tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.tolist(),
        "b2": model.b2,
        "scaler": {"min": scaler.min, "max": scaler.max,
                   "range_lo": scaler.range_lo, "range_hi": scaler.range_hi},
        "seed": int(seed),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_mlp_checkpoint(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    if doc.get("model_type") != "relu_mlp":
        raise SchemaError(f"{path}: not a relu_mlp checkpoint")
    if doc.get("version") != MLP_CHECKPOINT_VERSION:
        raise SchemaError(f"{path}: unsupported version {doc.get('version')!r}")
    for key in ("h", "m", "W1", "b1", "W2", "b2", "scaler"):
        if key not in doc:
            raise SchemaError(f"{path}: missing field {key!r}")
    W1 = np.asarray(doc["W1"], dtype=float)
    if W1.shape != (doc["h"], doc["m"]):
        raise SchemaError(f"{path}: W1 shape mismatch")
    model = MlpModel(W1, np.asarray(doc["b1"]), np.asarray(doc["W2"]), doc["b2"])
    sc = doc["scaler"]
    scaler = ScalerState(sc["min"], sc["max"], sc["range_lo"], sc["range_hi"])
    return model, scaler
