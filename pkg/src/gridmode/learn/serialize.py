"""Exact round-trip model persistence (single .npz per model)."""

from __future__ import annotations

import numpy as np

from ..errors import NotTreeBased, SchemaError
from .bayes import GaussianNB
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .linear import LinearSVM, LogisticRegressionGD
from .neighbors import KNearest
from .scaler import Scaler
from .tree import DecisionTree, Tree

FORMAT_VERSION = 1
_TREE_FIELDS = ("feature", "threshold", "left", "right",
                "node_w", "node_m", "node_q", "value")


def _pack_trees(trees):
    arrays = {"tree_sizes": np.array([t.n_nodes for t in trees], np.int64),
              "tree_n_features": np.int64(trees[0].n_features)}
    for f in _TREE_FIELDS:
        arrays[f"tree_{f}"] = np.concatenate([getattr(t, f) for t in trees])
    return arrays

def _unpack_trees(data):
    sizes = data["tree_sizes"]
    nf = int(data["tree_n_features"])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    trees = []
    for k in range(sizes.size):
        lo, hi = offsets[k], offsets[k + 1]
        fields = {f: data[f"tree_{f}"][lo:hi] for f in _TREE_FIELDS}
        trees.append(Tree(n_nodes=int(sizes[k]), n_features=nf, **fields))
    return trees


def save_model(path, name: str, model, scaler: Scaler | None = None,
               feature_names=None) -> None:
    arrays = {"version": np.int64(FORMAT_VERSION), "kind": np.str_(name)}
    if scaler is not None:
        arrays["scaler_mean"] = scaler.mean
        arrays["scaler_std"] = scaler.std
    if feature_names is not None:
        arrays["feature_names"] = np.array(list(feature_names), dtype=np.str_)

    if name in ("lr", "svm"):
        arrays.update(w=model.w, b=np.float64(model.b))
        if name == "lr":
            arrays.update(max_iter=np.int64(model.max_iter),
                          learning_rate=np.float64(model.learning_rate))
        else:
            arrays.update(c=np.float64(model.c), epochs=np.int64(model.epochs))
    elif name == "dt":
        arrays.update(max_depth=np.int64(model.max_depth), **_pack_trees([model.tree]))
    elif name == "rf":
        arrays.update(max_depth=np.int64(model.max_depth),
                      seed=np.int64(model.seed), **_pack_trees(model.trees))
    elif name == "xgb":
        arrays.update(max_depth=np.int64(model.max_depth),
                      shrinkage=np.float64(model.shrinkage),
                      f0=np.float64(model.f0), **_pack_trees(model.trees))
        arrays["leaf_values"] = np.concatenate(model.leaf_values)
    elif name == "knn":
        arrays.update(k=np.int64(model.k), x=model.x, y=model.y)
    elif name == "nbc":
        arrays.update(mu=model.mu, var=model.var, log_prior=model.log_prior)
    else:
        raise SchemaError(f"unknown learner kind '{name}'")
    np.savez(path, **arrays)


def load_model(path, with_names: bool = False):
    """Returns (name, model, scaler_or_None) and, with with_names=True, the
    stored feature names (or None) as a fourth element."""
    with np.load(path, allow_pickle=False) as data:
        if int(data["version"]) != FORMAT_VERSION:
            raise SchemaError(f"unsupported model format {data['version']}")
        name = str(data["kind"])
        scaler = None
        if "scaler_mean" in data:
            scaler = Scaler(mean=data["scaler_mean"], std=data["scaler_std"])
        names = None
        if "feature_names" in data:
            names = [str(s) for s in data["feature_names"]]

        if name == "lr":
            model = LogisticRegressionGD(max_iter=int(data["max_iter"]),
                                         learning_rate=float(data["learning_rate"]))
            model.w, model.b = data["w"], float(data["b"])
        elif name == "svm":
            model = LinearSVM(c=float(data["c"]), epochs=int(data["epochs"]))
            model.w, model.b = data["w"], float(data["b"])
        elif name == "dt":
            model = DecisionTree(max_depth=int(data["max_depth"]))
            model.tree = _unpack_trees(data)[0]
        elif name == "rf":
            model = RandomForest(max_depth=int(data["max_depth"]),
                                 seed=int(data["seed"]))
            model.trees = _unpack_trees(data)
            model.n_trees = len(model.trees)
            model.n_features = model.trees[0].n_features
        elif name == "xgb":
            model = GradientBoostedTrees(max_depth=int(data["max_depth"]),
                                         shrinkage=float(data["shrinkage"]))
            model.trees = _unpack_trees(data)
            model.rounds = len(model.trees)
            model.f0 = float(data["f0"])
            model.n_features = model.trees[0].n_features
            sizes = data["tree_sizes"]
            offsets = np.concatenate([[0], np.cumsum(sizes)])
            flat = data["leaf_values"]
            model.leaf_values = [flat[offsets[k]:offsets[k + 1]]
                                 for k in range(sizes.size)]
        elif name == "knn":
            model = KNearest(k=int(data["k"]))
            model.x, model.y = data["x"], data["y"]
        elif name == "nbc":
            model = GaussianNB()
            model.mu, model.var = data["mu"], data["var"]
            model.log_prior = data["log_prior"]
        else:
            raise SchemaError(f"unknown learner kind '{name}'")
    if with_names:
        return name, model, scaler, names
    return name, model, scaler


def top_importances(name: str, model, feature_names, k: int = 5):
    """Ranked (feature name, weight) pairs for tree-based models."""
    if name not in ("dt", "rf"):
        raise NotTreeBased(f"'{name}' has no Gini importances")
    imp = model.feature_importances()
    order = np.argsort(-imp, kind="stable")
    k = min(k, len(feature_names))
    return [(feature_names[i], float(imp[i])) for i in order[:k]]
