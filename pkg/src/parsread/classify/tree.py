"""CART decision trees (Gini impurity) and bagged random forests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InsufficientData, SchemaMismatch

N_CLASSES = 3
LEAF = -1


@dataclass
class TreeConfig:
    max_depth: int | None = None
    min_leaf: int = 1
    # None = all features at every split; "sqrt" = floor(sqrt(D)); int = that many
    max_features: int | str | None = None


@dataclass
class TreeModel:
    """Flat node arrays; ``feature[i] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, C)
    dim: int

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def apply(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise SchemaMismatch(f"vector dimension {X.shape[1]} != model dimension {self.dim}")
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature[node]
            inner = f != LEAF
            if not inner.any():
                return node
            r, n = rows[inner], node[inner]
            go_left = X[r, f[inner]] <= self.threshold[n]
            node[inner] = np.where(go_left, self.left[n], self.right[n])

    def scores(self, X) -> np.ndarray:
        c = self.counts[self.apply(X)].astype(np.float64)
        return c / c.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.counts[self.apply(X)], axis=1)


def _resolve_max_features(spec, d: int) -> int:
    if spec is None:
        return d
    if spec == "sqrt":
        return max(1, int(math.isqrt(d)))
    return max(1, min(int(spec), d))


def _gini_split(xs: np.ndarray, ys: np.ndarray, n_classes: int, min_leaf: int):
    """Best midpoint threshold on one feature: (weighted gini, threshold) or None."""
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    n = len(xs)
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), ys] = 1.0
    left = np.cumsum(onehot, axis=0)[:-1]
    right = left[-1] + onehot[-1] - left
    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    valid = (xs[:-1] < xs[1:]) & (n_left >= min_leaf) & (n_right >= min_leaf)
    if not valid.any():
        return None
    g_left = 1.0 - np.sum((left / n_left[:, None]) ** 2, axis=1)
    g_right = 1.0 - np.sum((right / n_right[:, None]) ** 2, axis=1)
    weighted = np.where(valid, (n_left * g_left + n_right * g_right) / n, np.inf)
    i = int(np.argmin(weighted))
    thr = (xs[i] + xs[i + 1]) / 2.0
    if not xs[i] <= thr < xs[i + 1]:
        thr = xs[i]
    return float(weighted[i]), float(thr)


class _Builder:
    def __init__(self, X, y, config: TreeConfig, rng, n_classes: int):
        self.X, self.y, self.cfg, self.rng, self.C = X, y, config, rng, n_classes
        self.k = _resolve_max_features(config.max_features, X.shape[1])
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[np.ndarray] = []

    def _new_node(self, idx) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.counts.append(np.bincount(self.y[idx], minlength=self.C))
        return len(self.feature) - 1

    def _candidates(self) -> list[np.ndarray]:
        d = self.X.shape[1]
        if self.k >= d or self.rng is None:
            return [np.arange(d)]
        perm = self.rng.permutation(d)
        # fall back to the unsampled features only if the sample cannot split
        return [np.sort(perm[: self.k]), np.sort(perm[self.k :])]

    def _best_split(self, idx):
        for group in self._candidates():
            best = None
            for f in group:
                res = _gini_split(self.X[idx, f], self.y[idx], self.C, self.cfg.min_leaf)
                if res is not None and (best is None or res[0] < best[0]):
                    best = (res[0], int(f), res[1])
            if best is not None:
                return best
        return None

    def build(self, idx, depth: int) -> int:
        node = self._new_node(idx)
        counts = self.counts[node]
        if np.count_nonzero(counts) <= 1:
            return node
        if self.cfg.max_depth is not None and depth >= self.cfg.max_depth:
            return node
        if len(idx) < 2 * self.cfg.min_leaf:
            return node
        split = self._best_split(idx)
        if split is None:
            return node
        _, f, thr = split
        mask = self.X[idx, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self.build(idx[mask], depth + 1)
        self.right[node] = self.build(idx[~mask], depth + 1)
        return node

    def model(self) -> TreeModel:
        return TreeModel(
            np.array(self.feature, dtype=np.int64),
            np.array(self.threshold, dtype=np.float64),
            np.array(self.left, dtype=np.int64),
            np.array(self.right, dtype=np.int64),
            np.vstack(self.counts).astype(np.int64),
            self.X.shape[1],
        )


def _grow(X, y, config: TreeConfig, rng, n_classes: int) -> TreeModel:
    b = _Builder(X, y, config, rng, n_classes)
    b.build(np.arange(len(y)), 0)
    return b.model()


def train_tree(X, y, config: TreeConfig | None = None, seed: int = 0, n_classes: int = N_CLASSES) -> TreeModel:
    """Exhaustive CART; unrestricted depth by default, so consistent data is fit exactly."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise InsufficientData("cannot grow a tree on an empty dataset")
    config = config or TreeConfig()
    rng = np.random.default_rng(seed) if config.max_features is not None else None
    return _grow(X, y, config, rng, n_classes)


@dataclass
class ForestConfig:
    n_estimators: int = 50
    max_features: int | str | None = "sqrt"
    bootstrap: bool = True
    max_depth: int | None = None
    min_leaf: int = 1


@dataclass
class ForestModel:
    trees: list[TreeModel]
    tree_seeds: list[int]
    config: ForestConfig = field(default_factory=ForestConfig)

    @property
    def dim(self) -> int:
        return self.trees[0].dim

    def votes(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        v = np.zeros((len(X), N_CLASSES))
        for t in self.trees:
            v[np.arange(len(X)), t.predict(X)] += 1
        return v

    def scores(self, X) -> np.ndarray:
        """Vote fractions per class."""
        return self.votes(X) / len(self.trees)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.votes(X), axis=1)


def train_forest(
    X, y, n_estimators: int = 50, seed: int = 0, config: ForestConfig | None = None, n_classes: int = N_CLASSES
) -> ForestModel:
    """Bagged CART trees; per-tree seeds are derived from ``seed`` up front."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise InsufficientData("cannot grow a forest on an empty dataset")
    config = config or ForestConfig(n_estimators=n_estimators)
    tree_cfg = TreeConfig(config.max_depth, config.min_leaf, config.max_features)
    seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(config.n_estimators)]
    trees = []
    for s in seeds:
        rng = np.random.default_rng(s)
        if config.bootstrap:
            idx = rng.integers(0, len(y), size=len(y))
        else:
            idx = np.arange(len(y))
        feature_rng = rng if config.max_features is not None else None
        trees.append(_grow(X[idx], y[idx], tree_cfg, feature_rng, n_classes))
    return ForestModel(trees, seeds, config)
