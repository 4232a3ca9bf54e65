"""Training pipeline, repeated cross-validation and generalization tests.

Mode labels map to integer classes GFL=0, GFM=1.  LR, SVM and k-NN consume
standardized features (scaler fitted on the training split only); the tree
learners and naive Bayes consume raw features.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..data.dataset import Dataset
from ..errors import ParamOutOfRange
from .bayes import GaussianNB
from .boosting import GradientBoostedTrees
from .forest import RandomForest
from .linear import LinearSVM, LogisticRegressionGD
from .neighbors import KNearest
from .scaler import Scaler, fit_scaler
from .split import stratified_split
from .tree import DecisionTree

MODE_TO_Y = {"GFL": 0, "GFM": 1}
Y_TO_MODE = {0: "GFL", 1: "GFM"}

LEARNER_NAMES = ("lr", "rf", "dt", "nbc", "xgb", "svm", "knn")
SCALED_LEARNERS = frozenset({"lr", "svm", "knn"})
TREE_LEARNERS = frozenset({"dt", "rf"})


@dataclass(frozen=True)
class Hyperparams:
    """Model parameters; defaults follow the classification study setup,
    with canonical GBT values standing in for the XGB row."""

    lr_max_iter: int = 100
    lr_rate: float = 0.1
    dt_max_depth: int = 6
    rf_n_trees: int = 100
    knn_k: int = 20
    svm_c: float = 1.0
    svm_epochs: int = 500
    gbt_rounds: int = 100
    gbt_depth: int = 3
    gbt_shrinkage: float = 0.1


def make_learner(name: str, hp: Hyperparams = Hyperparams(), seed: int = 0,
                 threads: int = 1):
    if name == "lr":
        return LogisticRegressionGD(max_iter=hp.lr_max_iter,
                                    learning_rate=hp.lr_rate)
    if name == "rf":
        return RandomForest(n_trees=hp.rf_n_trees, max_depth=hp.dt_max_depth,
                            seed=seed, threads=threads)
    if name == "dt":
        return DecisionTree(max_depth=hp.dt_max_depth)
    if name == "nbc":
        return GaussianNB()
    if name == "xgb":
        return GradientBoostedTrees(rounds=hp.gbt_rounds, max_depth=hp.gbt_depth,
                                    shrinkage=hp.gbt_shrinkage)
    if name == "svm":
        return LinearSVM(c=hp.svm_c, epochs=hp.svm_epochs)
    if name == "knn":
        return KNearest(k=hp.knn_k)
    raise ParamOutOfRange(f"unknown learner '{name}'; valid: {LEARNER_NAMES}")


def labels_to_y(modes) -> np.ndarray:
    try:
        return np.array([MODE_TO_Y[m] for m in modes], np.int64)
    except KeyError as exc:
        raise ParamOutOfRange(f"unknown mode label {exc}") from None


@dataclass
class EvaluationReport:
    """Accuracy, confusion counts and optional cross-validation stats."""

    learner: str
    accuracy: float
    confusion: dict               # keys "GFM->GFM", "GFM->GFL", ...
    per_structure: dict
    n_eval: int
    cv_mean: float = None
    cv_std: float = None
    metadata: dict = field(default_factory=dict)

    def check(self) -> None:
        total = sum(self.confusion.values())
        correct = self.confusion["GFM->GFM"] + self.confusion["GFL->GFL"]
        if total != self.n_eval or abs(self.accuracy - correct / total) > 1e-12:
            raise ParamOutOfRange("inconsistent confusion counts")

    def to_text(self) -> str:
        lines = [f"learner: {self.learner}",
                 f"samples: {self.n_eval}",
                 f"accuracy: {self.accuracy:.6f}"]
        if self.cv_mean is not None:
            lines.append(f"cv_mean: {self.cv_mean:.6f}")
            lines.append(f"cv_std: {self.cv_std:.6f}")
        lines.append("confusion: " + ", ".join(
            f"{k}={v}" for k, v in sorted(self.confusion.items())))
        for s, acc in sorted(self.per_structure.items()):
            lines.append(f"structure {s}: {acc:.6f}")
        return "\n".join(lines) + "\n"


def _confusion(y_true, y_pred) -> dict:
    return {
        "GFM->GFM": int(np.sum((y_true == 1) & (y_pred == 1))),
        "GFM->GFL": int(np.sum((y_true == 1) & (y_pred == 0))),
        "GFL->GFM": int(np.sum((y_true == 0) & (y_pred == 1))),
        "GFL->GFL": int(np.sum((y_true == 0) & (y_pred == 0))),
    }


def _report(learner, y_true, y_pred, structures) -> EvaluationReport:
    acc = float(np.mean(y_true == y_pred)) if y_true.size else 0.0
    per = {}
    for s in sorted(set(structures)):
        sel = structures == s
        per[s] = float(np.mean(y_true[sel] == y_pred[sel]))
    rep = EvaluationReport(learner=learner, accuracy=acc,
                           confusion=_confusion(y_true, y_pred),
                           per_structure=per, n_eval=int(y_true.size))
    rep.check()
    return rep


def train_on(ds: Dataset, name: str, hp: Hyperparams = Hyperparams(),
             seed: int = 0, threads: int = 1):
    """Fit one learner on a dataset; returns (model, scaler-or-None)."""
    y = labels_to_y(ds.modes)
    scaler = fit_scaler(ds.features) if name in SCALED_LEARNERS else None
    x = scaler.transform(ds.features) if scaler else ds.features
    model = make_learner(name, hp, seed=seed, threads=threads).fit(x, y)
    return model, scaler


def evaluate_on(model, scaler, ds: Dataset, name: str) -> EvaluationReport:
    x = scaler.transform(ds.features) if scaler else ds.features
    y = labels_to_y(ds.modes)
    return _report(name, y, model.predict(x), ds.structures)


def run_split_pipeline(ds: Dataset, name: str, hp: Hyperparams = Hyperparams(),
                       seed: int = 0, train_fraction: float = 0.8,
                       threads: int = 1):
    """Split 80/20, fit, evaluate on the held-out 20%."""
    train, test = stratified_split(ds, train_fraction, seed)
    model, scaler = train_on(train, name, hp, seed=seed, threads=threads)
    return model, scaler, evaluate_on(model, scaler, test, name)


def cross_validate(ds: Dataset, name: str, hp: Hyperparams = Hyperparams(),
                   runs: int = 100, seed: int = 0, train_fraction: float = 0.8,
                   threads: int = 1):
    """Repeated stratified-holdout cross-validation.

    Each run reshuffles the 80/20 split with a seed derived from (seed, run)
    and retrains from scratch; returns (mean, std, accuracies).
    """
    if runs < 1:
        raise ParamOutOfRange("runs must be >= 1")

    def one(run: int) -> float:
        run_seed = int(np.random.SeedSequence([seed, run]).generate_state(1)[0])
        _, _, rep = run_split_pipeline(ds, name, hp, seed=run_seed,
                                       train_fraction=train_fraction)
        return rep.accuracy

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            accs = np.array(list(pool.map(one, range(runs))))
    else:
        accs = np.array([one(r) for r in range(runs)])
    return float(accs.mean()), float(accs.std()), accs


def evaluate_generalization(model, scaler, holdout: Dataset,
                            name: str = "model") -> EvaluationReport:
    """Accuracy on a structure never seen in training (all-GFL holdout:
    accuracy is the fraction predicted GFL)."""
    rep = evaluate_on(model, scaler, holdout, name)
    rep.metadata["holdout_structures"] = sorted(set(holdout.structures))
    return rep
