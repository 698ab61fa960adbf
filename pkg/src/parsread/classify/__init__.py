"""The classifier suite: Gaussian naive Bayes, linear SVM, decision tree, random forest.

Every fitted estimator exposes ``scores(X) -> (n, 3)`` and ``predict(X)``;
predicted labels are the argmax of the scores with ties going to the lowest
class index.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .gnb import GnbModel, predict_gnb, train_gnb
from .svm import LinearSvmModel, predict_linear, train_linear_svm
from .tree import ForestConfig, ForestModel, TreeConfig, TreeModel, train_forest, train_tree
from .model_io import ClassifierModel, dumps, load_model, loads, save_model

KINDS = ("gnb", "linear-svm", "tree", "forest")


@dataclass
class ClassifierConfig:
    kind: str = "linear-svm"
    seed: int = 0
    # linear SVM
    lam: float = 1e-4
    epochs: int = 100
    # gaussian NB
    var_floor: float = 1e-9
    # trees
    max_depth: int | None = None
    min_leaf: int = 1
    n_estimators: int = 50
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown classifier {self.kind!r}; choose from {', '.join(KINDS)}")

    def to_dict(self) -> dict:
        return asdict(self)


def fit(config: ClassifierConfig, X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if config.kind == "gnb":
        return train_gnb(X, y, config.var_floor)
    if config.kind == "linear-svm":
        return train_linear_svm(X, y, config.lam, config.epochs, config.seed)
    if config.kind == "tree":
        return train_tree(X, y, TreeConfig(config.max_depth, config.min_leaf, None), config.seed)
    fc = ForestConfig(config.n_estimators, config.max_features, config.bootstrap, config.max_depth, config.min_leaf)
    return train_forest(X, y, seed=config.seed, config=fc)


__all__ = [
    "KINDS",
    "ClassifierConfig",
    "ClassifierModel",
    "ForestConfig",
    "ForestModel",
    "GnbModel",
    "LinearSvmModel",
    "TreeConfig",
    "TreeModel",
    "dumps",
    "fit",
    "load_model",
    "loads",
    "predict_gnb",
    "predict_linear",
    "save_model",
    "train_forest",
    "train_gnb",
    "train_linear_svm",
    "train_tree",
]
