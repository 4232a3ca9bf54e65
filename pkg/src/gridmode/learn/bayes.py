"""Gaussian naive Bayes on raw features.

Class-conditional variances are floored at 1e-9 of the pooled feature
variance: oracle-generated features can be nearly constant at band edges
and a zero variance would blow up the log-likelihood.
"""

from __future__ import annotations

import numpy as np

from ..errors import WidthMismatch
from .tree import check_classes

VAR_FLOOR_REL = 1e-9


class GaussianNB:
    def __init__(self):
        self.mu = None          # (2, F)
        self.var = None
        self.log_prior = None

    def fit(self, x: np.ndarray, y: np.ndarray) -> "GaussianNB":
        x = np.asarray(x, float)
        y = np.asarray(y, np.int64)
        check_classes(y)
        floor = VAR_FLOOR_REL * x.var(axis=0) + 1e-300
        self.mu = np.empty((2, x.shape[1]))
        self.var = np.empty((2, x.shape[1]))
        prior = np.empty(2)
        for cls in (0, 1):
            xc = x[y == cls]
            self.mu[cls] = xc.mean(axis=0)
            self.var[cls] = np.maximum(xc.var(axis=0), floor)
            prior[cls] = xc.shape[0] / x.shape[0]
        self.log_prior = np.log(prior)
        return self

    def log_likelihood(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        if x.shape[1] != self.mu.shape[1]:
            raise WidthMismatch(f"expected {self.mu.shape[1]} features, "
                                f"got {x.shape[1]}")
        ll = np.empty((x.shape[0], 2))
        for cls in (0, 1):
            z = (x - self.mu[cls]) ** 2 / self.var[cls]
            ll[:, cls] = -0.5 * (z + np.log(2.0 * np.pi * self.var[cls])).sum(axis=1)
        return ll + self.log_prior

    def predict(self, x: np.ndarray) -> np.ndarray:
        ll = self.log_likelihood(x)
        out = np.where(ll[:, 1] > ll[:, 0], 1, 0)
        tie = ll[:, 1] == ll[:, 0]
        if tie.any():
            # prior-majority, then GFL
            majority = 1 if self.log_prior[1] > self.log_prior[0] else 0
            out[tie] = majority
        return out.astype(np.int64)
