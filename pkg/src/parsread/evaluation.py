"""Cross-validation, confusion matrices, precision/recall/F1 and ROC-AUC.

Conventions: a 0/0 metric is 0; weighted metrics weight each class by its
support; the multi-class AUC is the macro mean of one-vs-rest AUCs; fold
metrics are averaged with equal weight per fold.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from . import classify
from .errors import TooFewExamples, ZeroSupport
from .features import LEVELS, Scaler, fit_scaler, transform

N_CLASSES = 3
ZERO_DIVISION_NOTE = "0/0 precision, recall or F1 is reported as 0"


def kfold_split(labels, k: int = 10, seed: int = 0, stratify: bool = True) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint, exhaustive folds whose sizes differ by at most one.

    With ``stratify`` the examples are dealt round-robin class by class, so
    every class is spread over the folds as evenly as its size allows.
    """
    y = np.asarray(labels)
    n = len(y)
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < k:
        raise TooFewExamples(f"{n} examples cannot fill {k} folds")
    rng = np.random.default_rng(seed)
    if stratify:
        order = np.concatenate([rng.permutation(np.flatnonzero(y == c)) for c in np.unique(y)])
    else:
        order = rng.permutation(n)
    fold_of = np.empty(n, dtype=np.int64)
    fold_of[order] = np.arange(n) % k
    folds = []
    for f in range(k):
        test = np.flatnonzero(fold_of == f)
        train = np.flatnonzero(fold_of != f)
        folds.append((train, test))
    return folds


def confusion_matrix(y_true, y_pred, n_classes: int = N_CLASSES) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(y_true, dtype=np.int64), np.asarray(y_pred, dtype=np.int64)), 1)
    return cm


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def precision(cm: np.ndarray, c: int) -> float:
    return _ratio(cm[c, c], cm[:, c].sum())


def recall(cm: np.ndarray, c: int) -> float:
    return _ratio(cm[c, c], cm[c, :].sum())


def f1_from(p: float, r: float) -> float:
    return _ratio(2 * p * r, p + r)


def f1(cm: np.ndarray, c: int) -> float:
    return f1_from(precision(cm, c), recall(cm, c))


@dataclass
class ClassReport:
    precision: list[float]
    recall: list[float]
    f1: list[float]
    support: list[int]

    @classmethod
    def from_confusion(cls, cm: np.ndarray) -> "ClassReport":
        cm = np.asarray(cm)
        k = cm.shape[0]
        return cls(
            [precision(cm, c) for c in range(k)],
            [recall(cm, c) for c in range(k)],
            [f1(cm, c) for c in range(k)],
            [int(s) for s in cm.sum(axis=1)],
        )

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1, "support": self.support}


def weighted_metrics(report: ClassReport) -> tuple[float, float, float]:
    total = sum(report.support)
    if total <= 0:
        raise ZeroSupport("weighted metrics need a positive total support")
    w = [s / total for s in report.support]
    return tuple(math.fsum(wi * m for wi, m in zip(w, metric)) for metric in (report.precision, report.recall, report.f1))


def binary_auc(scores, positive) -> float:
    """Mann-Whitney AUC with midranks for ties; nan if a side is empty."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = len(positive) - n_pos
    if n_pos == 0 or n_neg == 0:
        return float("nan")
    ranks = rankdata(scores, method="average")
    return float((ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


@dataclass
class AucResult:
    macro: float
    per_class: list[float | None]
    skipped: list[int]


def roc_auc_ovr_detail(scores, labels, n_classes: int = N_CLASSES) -> AucResult:
    S = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    per_class: list[float | None] = []
    skipped = []
    for c in range(n_classes):
        a = binary_auc(S[:, c], y == c)
        if math.isnan(a):
            per_class.append(None)
            skipped.append(c)
        else:
            per_class.append(a)
    vals = [a for a in per_class if a is not None]
    return AucResult(math.fsum(vals) / len(vals) if vals else float("nan"), per_class, skipped)


def roc_auc_ovr(scores, labels, n_classes: int = N_CLASSES) -> float:
    return roc_auc_ovr_detail(scores, labels, n_classes).macro


@dataclass
class SplitResult:
    confusion: np.ndarray
    report: ClassReport
    weighted: tuple[float, float, float]
    auc: AucResult

    @classmethod
    def compute(cls, y_true, y_pred, scores) -> "SplitResult":
        cm = confusion_matrix(y_true, y_pred)
        rep = ClassReport.from_confusion(cm)
        return cls(cm, rep, weighted_metrics(rep), roc_auc_ovr_detail(scores, y_true))

    def to_dict(self) -> dict:
        p, r, f = self.weighted
        return {
            "confusion": self.confusion.tolist(),
            "per_class": self.report.to_dict(),
            "weighted": {"precision": p, "recall": r, "f1": f},
            "roc_auc": None if math.isnan(self.auc.macro) else self.auc.macro,
            "roc_auc_per_class": self.auc.per_class,
            "auc_skipped_classes": [LEVELS[c] for c in self.auc.skipped],
        }


@dataclass
class FoldResult:
    index: int
    train_idx: np.ndarray
    test_idx: np.ndarray
    scaler: Scaler
    train: SplitResult
    test: SplitResult


def run_fold(config: classify.ClassifierConfig, X, y, train_idx, test_idx, index: int = 0) -> FoldResult:
    """Fit the scaler and classifier on the training split only, then score both splits."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    scaler = fit_scaler(X[train_idx])
    Xtr, Xte = transform(scaler, X[train_idx]), transform(scaler, X[test_idx])
    est = classify.fit(config, Xtr, y[train_idx])
    tr = SplitResult.compute(y[train_idx], est.predict(Xtr), est.scores(Xtr))
    te = SplitResult.compute(y[test_idx], est.predict(Xte), est.scores(Xte))
    return FoldResult(index, np.asarray(train_idx), np.asarray(test_idx), scaler, tr, te)


def _mean(values) -> float | None:
    vals = [v for v in values if v is not None and not math.isnan(v)]
    return math.fsum(vals) / len(vals) if vals else None


@dataclass
class EvalReport:
    classifier: dict
    k: int
    seed: int
    stratified: bool
    folds: list[FoldResult] = field(repr=False)

    def summary(self, split: str) -> dict:
        results: list[SplitResult] = [getattr(f, split) for f in self.folds]
        per_class = {
            metric: [_mean(getattr(r.report, metric)[c] for r in results) for c in range(N_CLASSES)]
            for metric in ("precision", "recall", "f1")
        }
        return {
            "precision": _mean(r.weighted[0] for r in results),
            "recall": _mean(r.weighted[1] for r in results),
            "f1": _mean(r.weighted[2] for r in results),
            "roc_auc": _mean(r.auc.macro for r in results),
            "per_class": per_class,
        }

    def to_dict(self) -> dict:
        return {
            "classifier": self.classifier,
            "k": self.k,
            "seed": self.seed,
            "stratified": self.stratified,
            "aggregation": "unweighted mean over folds of fold-level metrics",
            "averaging": "support-weighted over classes; ROC-AUC is macro one-vs-rest",
            "zero_division": ZERO_DIVISION_NOTE,
            "classes": list(LEVELS),
            "train": self.summary("train"),
            "test": self.summary("test"),
            "folds": [
                {
                    "fold": f.index,
                    "n_train": int(len(f.train_idx)),
                    "n_test": int(len(f.test_idx)),
                    "train": f.train.to_dict(),
                    "test": f.test.to_dict(),
                }
                for f in self.folds
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def render(self) -> str:
        """Overall and per-class tables, train value above test value."""
        tr, te = self.summary("train"), self.summary("test")

        def fmt(v):
            return "   -  " if v is None else f"{v:6.3f}"

        lines = [
            f"classifier: {self.classifier.get('kind')}  k={self.k}  seed={self.seed}",
            f"{'':14}{'Precision':>10}{'Recall':>10}{'F1-score':>10}{'ROC_AUC':>10}",
        ]
        for name, s in (("train", tr), ("test", te)):
            lines.append(
                f"{name:14}{fmt(s['precision']):>10}{fmt(s['recall']):>10}{fmt(s['f1']):>10}{fmt(s['roc_auc']):>10}"
            )
        lines.append("")
        lines.append(f"{'Class':14}{'Precision':>10}{'Recall':>10}{'F1-score':>10}")
        for c, level in enumerate(LEVELS):
            for name, s in (("train", tr), ("test", te)):
                label = f"{level.capitalize()} ({name})"
                pc = s["per_class"]
                lines.append(
                    f"{label:14}{fmt(pc['precision'][c]):>10}{fmt(pc['recall'][c]):>10}{fmt(pc['f1'][c]):>10}"
                )
        lines.append("")
        lines.append(f"note: {ZERO_DIVISION_NOTE}; metrics are fold-averaged")
        return "\n".join(lines) + "\n"


def cross_validate(
    config: classify.ClassifierConfig,
    X,
    y,
    k: int = 10,
    seed: int = 0,
    stratify: bool = True,
) -> EvalReport:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    folds = [
        run_fold(config, X, y, tr, te, i) for i, (tr, te) in enumerate(kfold_split(y, k, seed, stratify))
    ]
    return EvalReport(config.to_dict(), k, seed, stratify, folds)
