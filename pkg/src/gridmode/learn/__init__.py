from .scaler import STD_FLOOR, Scaler, fit_scaler
from .split import stratified_split
from .tree import DecisionTree, Tree
from .forest import RandomForest
from .boosting import GradientBoostedTrees
from .linear import LinearSVM, LogisticRegressionGD
from .neighbors import KNearest
from .bayes import GaussianNB
from .evaluate import (LEARNER_NAMES, SCALED_LEARNERS, TREE_LEARNERS,
                       EvaluationReport, Hyperparams, cross_validate,
                       evaluate_generalization, evaluate_on, labels_to_y,
                       make_learner, run_split_pipeline, train_on)
from .serialize import load_model, save_model, top_importances

__all__ = [
    "STD_FLOOR", "Scaler", "fit_scaler", "stratified_split",
    "DecisionTree", "Tree", "RandomForest", "GradientBoostedTrees",
    "LinearSVM", "LogisticRegressionGD", "KNearest", "GaussianNB",
    "LEARNER_NAMES", "SCALED_LEARNERS", "TREE_LEARNERS", "EvaluationReport",
    "Hyperparams", "cross_validate", "evaluate_generalization", "evaluate_on",
    "labels_to_y", "make_learner", "run_split_pipeline", "train_on",
    "load_model", "save_model", "top_importances",
]
