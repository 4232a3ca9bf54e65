"""Linear classifiers: logistic regression and a linear soft-margin SVM.

Both consume standardized features and train by deterministic full-batch
(sub)gradient descent from zero initial weights.
"""

from __future__ import annotations

import numpy as np

from ..errors import WidthMismatch
from .boosting import _sigmoid
from .tree import check_classes


class LogisticRegressionGD:
    """Full-batch gradient descent on the logistic loss, no regularization,
    exactly max_iter epochs at a fixed learning rate."""

    def __init__(self, max_iter: int = 100, learning_rate: float = 0.1):
        self.max_iter = max_iter
        self.learning_rate = learning_rate
        self.w = None
        self.b = 0.0

    def fit(self, x: np.ndarray, y: np.ndarray) -> "LogisticRegressionGD":
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        check_classes(y)
        n, f = x.shape
        self.w = np.zeros(f)
        self.b = 0.0
        for _ in range(self.max_iter):
            err = _sigmoid(x @ self.w + self.b) - y
            self.w -= self.learning_rate * (x.T @ err) / n
            self.b -= self.learning_rate * err.mean()
        return self

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        if x.shape[1] != self.w.size:
            raise WidthMismatch(f"expected {self.w.size} features, got {x.shape[1]}")
        return x @ self.w + self.b

    def predict(self, x: np.ndarray) -> np.ndarray:
        return (self.decision_function(x) > 0.0).astype(np.int64)


class LinearSVM:
    """L2-regularized hinge loss, lambda = 1/(c*n), minimized by full-batch
    projected subgradient descent (Pegasos step size 1/(lambda*t))."""

    def __init__(self, c: float = 1.0, epochs: int = 500):
        self.c = c
        self.epochs = epochs
        self.w = None
        self.b = 0.0

    def fit(self, x: np.ndarray, y: np.ndarray) -> "LinearSVM":
        x = np.asarray(x, float)
        y01 = np.asarray(y, float)
        check_classes(y01)
        ys = 2.0 * y01 - 1.0
        n, f = x.shape
        lam = 1.0 / (self.c * n)
        radius = 1.0 / np.sqrt(lam)
        self.w = np.zeros(f)
        self.b = 0.0
        for t in range(1, self.epochs + 1):
            eta = 1.0 / (lam * t)
            margin = ys * (x @ self.w + self.b)
            viol = margin < 1.0
            gw = lam * self.w - (ys[viol, None] * x[viol]).sum(axis=0) / n
            gb = -ys[viol].sum() / n
            self.w -= eta * gw
            self.b -= eta * gb
            norm = np.linalg.norm(self.w)
            if norm > radius:
                self.w *= radius / norm
        return self

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        if x.shape[1] != self.w.size:
            raise WidthMismatch(f"expected {self.w.size} features, got {x.shape[1]}")
        return x @ self.w + self.b

    def predict(self, x: np.ndarray) -> np.ndarray:
        return (self.decision_function(x) > 0.0).astype(np.int64)
