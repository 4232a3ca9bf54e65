"""Gradient-boosted trees with logistic loss (the XGB stand-in).

Additive depth-3 regression trees fitted to the logistic-loss gradient with
Newton leaf values, 100 rounds, shrinkage 0.1.  Deterministic: no row or
feature subsampling.
"""

from __future__ import annotations

import numpy as np

from .tree import all_feature_rows, check_classes, grow, presort


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class GradientBoostedTrees:
    def __init__(self, rounds: int = 100, max_depth: int = 3,
                 shrinkage: float = 0.1, min_leaf: float = 1.0):
        self.rounds = rounds
        self.max_depth = max_depth
        self.shrinkage = shrinkage
        self.min_leaf = min_leaf
        self.f0 = 0.0
        self.trees: list = []
        self.leaf_values: list = []
        self.n_features = 0

    def fit(self, x: np.ndarray, y: np.ndarray) -> "GradientBoostedTrees":
        x = np.ascontiguousarray(x, float)
        y = np.asarray(y, float)
        check_classes(y)
        n, nf = x.shape
        self.n_features = nf
        p0 = min(max(y.mean(), 1e-12), 1 - 1e-12)
        self.f0 = float(np.log(p0 / (1.0 - p0)))
        sorted_idx = presort(x)
        feats = all_feature_rows(nf, self.max_depth)
        w = np.ones(n)
        score = np.full(n, self.f0)
        self.trees, self.leaf_values = [], []

        for _ in range(self.rounds):
            p = _sigmoid(score)
            resid = y - p
            hess = p * (1.0 - p)
            tree = grow(x, sorted_idx, resid, w, feats, self.max_depth,
                        self.min_leaf)
            leaf = tree.apply(x)
            num = np.bincount(leaf, weights=resid, minlength=tree.n_nodes)
            den = np.bincount(leaf, weights=hess, minlength=tree.n_nodes)
            values = num / np.maximum(den, 1e-12)
            self.trees.append(tree)
            self.leaf_values.append(values)
            score += self.shrinkage * values[leaf]
        return self

    def decision_function(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        score = np.full(x.shape[0], self.f0)
        for tree, values in zip(self.trees, self.leaf_values):
            score += self.shrinkage * values[tree.apply(x)]
        return score

    def predict(self, x: np.ndarray) -> np.ndarray:
        return (self.decision_function(x) > 0.0).astype(np.int64)
