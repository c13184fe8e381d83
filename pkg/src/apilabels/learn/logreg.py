"""Logistic regression via full-batch gradient descent on L2-penalized
log-loss. Inputs are expected standardized or TF-IDF-normalized; the bias
is not penalized. Decision threshold is 0.5."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from apilabels.errors import DivergenceError


@dataclass
class LogregParams:
    lr: float = 0.1
    epochs: int = 500
    l2: float = 1e-4


@dataclass
class LogregModel:
    weights: np.ndarray
    bias: float
    params: LogregParams

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias, "params": vars(self.params).copy()}

    @classmethod
    def from_dict(cls, payload: dict) -> "LogregModel":
        return cls(
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=float(payload["bias"]),
            params=LogregParams(**payload["params"]),
        )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss_and_gradient(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss plus (l2/2)||w||^2, and its gradient in (w, b)."""
    with np.errstate(over="ignore"):  # divergence surfaces as non-finite loss
        z = X @ w + b
        # log(1 + e^z) - y*z, stable for large |z|
        loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) + 0.5 * l2 * float(w @ w)
        residual = _sigmoid(z) - y
        grad_w = X.T @ residual / X.shape[0] + l2 * w
        grad_b = float(residual.mean())
    return loss, grad_w, grad_b


def train_logreg(
    X: np.ndarray,
    y: np.ndarray,
    params: LogregParams | None = None,
) -> LogregModel:
    params = params or LogregParams()
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    for epoch in range(params.epochs):
        loss, grad_w, grad_b = loss_and_gradient(X, y, w, b, params.l2)
        if not np.isfinite(loss):
            raise DivergenceError(
                f"non-finite loss at epoch {epoch}; try a smaller learning rate than {params.lr}"
            )
        w -= params.lr * grad_w
        b -= params.lr * grad_b
    return LogregModel(weights=w, bias=b, params=params)


def predict_logreg(model: LogregModel, X: np.ndarray) -> np.ndarray:
    return (predict_proba_logreg(model, X) >= 0.5).astype(np.uint8)


def predict_proba_logreg(model: LogregModel, X: np.ndarray) -> np.ndarray:
    z = np.asarray(X, dtype=np.float64) @ model.weights + model.bias
    return _sigmoid(z)
