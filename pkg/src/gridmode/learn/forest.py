"""Random forest of Gini trees on bootstrap resamples.

Bootstrap draws are keyed by sample identity, not presentation order: fit()
first puts the training rows into a canonical order (sorted by the first
feature, full lexicographic sort on ties), so shuffling the input rows
changes nothing about the fitted forest.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .tree import Tree, check_classes, grow, presort


def canonical_order(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    k0 = x[:, 0]
    if np.unique(k0).size == k0.size:
        return np.argsort(k0, kind="stable")
    keys = (y,) + tuple(x[:, j] for j in range(x.shape[1] - 1, -1, -1))
    return np.lexsort(keys)


def _node_feature_draws(rng, n_features, mtry, max_nodes) -> np.ndarray:
    rows = np.empty((max_nodes, mtry), dtype=np.int32)
    for k in range(max_nodes):
        rows[k] = rng.choice(n_features, size=mtry, replace=False)
    return np.ascontiguousarray(rows)


class RandomForest:
    """100 bootstrap trees with sqrt(F) random feature subsets per split."""

    def __init__(self, n_trees: int = 100, max_depth: int = 6,
                 min_leaf: float = 1.0, seed: int = 0, threads: int = 1):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.seed = seed
        self.threads = threads
        self.trees: list = []
        self.n_features = 0

    def fit(self, x: np.ndarray, y: np.ndarray) -> "RandomForest":
        x = np.ascontiguousarray(x, float)
        y = np.asarray(y, float)
        check_classes(y)
        order = canonical_order(x, y)
        x = np.ascontiguousarray(x[order])
        y = y[order]
        n, f = x.shape
        self.n_features = f
        mtry = max(1, int(np.sqrt(f)))
        max_nodes = 2 ** (self.max_depth + 1) - 1
        sorted_idx = presort(x)

        def build(t: int) -> Tree:
            rng = np.random.default_rng([self.seed, t])
            w = np.bincount(rng.integers(0, n, n), minlength=n).astype(float)
            feats = _node_feature_draws(rng, f, mtry, max_nodes)
            return grow(x, sorted_idx, y, w, feats, self.max_depth, self.min_leaf)

        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                self.trees = list(pool.map(build, range(self.n_trees)))
        else:
            self.trees = [build(t) for t in range(self.n_trees)]
        return self

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        votes = np.zeros(x.shape[0])
        for tree in self.trees:
            votes += (tree.predict_value(x) > 0.5)
        return (votes > 0.5 * len(self.trees)).astype(np.int64)

    def feature_importances(self) -> np.ndarray:
        acc = np.zeros(self.n_features)
        for tree in self.trees:
            acc += tree.importance()
        total = acc.sum()
        return acc / total if total > 0 else acc
