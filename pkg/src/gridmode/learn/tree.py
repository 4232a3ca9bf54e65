"""Binary decision trees on the shared split-search kernel.

Splits minimize the weighted sum of child impurities.  For 0/1 class targets
the kernel's variance criterion ranks splits exactly like Gini impurity
(binary Gini is twice the Bernoulli variance), so importances reported here
are the classic mean-decrease-in-Gini up to the global factor that
normalization removes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import DegenerateData, WidthMismatch


@dataclass(frozen=True)
class Tree:
    """Grown tree arrays: feature < 0 marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    node_w: np.ndarray
    node_m: np.ndarray            # sum of w*y per node
    node_q: np.ndarray            # sum of w*y^2 per node
    n_nodes: int
    n_features: int
    value: np.ndarray             # leaf/node mean target

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Leaf index for every row."""
        x = np.asarray(x, float)
        if x.shape[1] != self.n_features:
            raise WidthMismatch(f"expected {self.n_features} features, "
                                f"got {x.shape[1]}")
        node = np.zeros(x.shape[0], dtype=np.int64)
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not active.any():
                return node
            rows = np.nonzero(active)[0]
            f = feat[rows]
            goes_left = x[rows, f] <= self.threshold[node[rows]]
            node[rows] = np.where(goes_left, self.left[node[rows]],
                                  self.right[node[rows]])

    def predict_value(self, x: np.ndarray) -> np.ndarray:
        return self.value[self.apply(x)]

    def raw_importance(self) -> np.ndarray:
        """Sum of weighted impurity decreases per split feature."""
        imp = np.zeros(self.n_features)
        for nid in range(self.n_nodes):
            f = self.feature[nid]
            if f < 0:
                continue
            lid, rid = self.left[nid], self.right[nid]
            sse = self.node_q[nid] - self.node_m[nid] ** 2 / self.node_w[nid]
            for cid in (lid, rid):
                if self.node_w[cid] > 0:
                    sse -= self.node_q[cid] - self.node_m[cid] ** 2 / self.node_w[cid]
            imp[f] += sse
        return imp

    def importance(self) -> np.ndarray:
        raw = self.raw_importance()
        total = raw.sum()
        return raw / total if total > 0 else raw


def grow(x, sorted_idx, y, w, node_feats, max_depth, min_leaf=1.0) -> Tree:
    """Grow one tree; inputs must be C-contiguous with int32 sorted_idx."""
    max_nodes = node_feats.shape[0]
    n = x.shape[0]
    feature = np.zeros(max_nodes, np.int32)
    threshold = np.zeros(max_nodes)
    left = np.zeros(max_nodes, np.int32)
    right = np.zeros(max_nodes, np.int32)
    node_w = np.zeros(max_nodes)
    node_m = np.zeros(max_nodes)
    node_q = np.zeros(max_nodes)
    node_depth = np.zeros(max_nodes, np.int32)
    node_of = np.zeros(n, np.int32)
    n_nodes = _kernels.grow_tree(x, sorted_idx, y, w, node_feats,
                                 int(max_depth), float(min_leaf),
                                 feature, threshold, left, right,
                                 node_w, node_m, node_q, node_depth, node_of)
    with np.errstate(invalid="ignore", divide="ignore"):
        value = np.where(node_w[:n_nodes] > 0,
                         node_m[:n_nodes] / np.maximum(node_w[:n_nodes], 1e-300),
                         0.0)
    return Tree(feature=feature[:n_nodes], threshold=threshold[:n_nodes],
                left=left[:n_nodes], right=right[:n_nodes],
                node_w=node_w[:n_nodes], node_m=node_m[:n_nodes],
                node_q=node_q[:n_nodes], n_nodes=int(n_nodes),
                n_features=x.shape[1], value=value)


def presort(x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(
        np.argsort(x, axis=0, kind="stable").astype(np.int32))


def all_feature_rows(n_features: int, max_depth: int) -> np.ndarray:
    max_nodes = 2 ** (max_depth + 1) - 1
    return np.ascontiguousarray(
        np.tile(np.arange(n_features, dtype=np.int32), (max_nodes, 1)))


def check_classes(y: np.ndarray) -> None:
    ones = int(np.sum(y > 0.5))
    zeros = y.size - ones
    if min(ones, zeros) < 2:
        raise DegenerateData(
            f"need >= 2 samples per class, got GFM={ones}, GFL={zeros}")


class DecisionTree:
    """Gini-split classification tree, depth-limited (default 6)."""

    def __init__(self, max_depth: int = 6, min_leaf: float = 1.0):
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.tree: Tree = None

    def fit(self, x: np.ndarray, y: np.ndarray) -> "DecisionTree":
        x = np.ascontiguousarray(x, float)
        y = np.asarray(y, float)
        check_classes(y)
        self.tree = grow(x, presort(x), y, np.ones(len(y)),
                         all_feature_rows(x.shape[1], self.max_depth),
                         self.max_depth, self.min_leaf)
        return self

    def predict(self, x: np.ndarray) -> np.ndarray:
        return (self.tree.predict_value(np.asarray(x, float)) > 0.5).astype(np.int64)

    def feature_importances(self) -> np.ndarray:
        return self.tree.importance()
