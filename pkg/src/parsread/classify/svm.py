"""One-vs-rest linear SVM trained with Pegasos-style subgradient steps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData, SchemaMismatch

N_CLASSES = 3


@dataclass
class LinearSvmModel:
    weights: np.ndarray  # (C, D)
    bias: np.ndarray  # (C,)
    lam: float
    epochs: int
    seed: int

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def scores(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise SchemaMismatch(f"vector dimension {X.shape[1]} != model dimension {self.dim}")
        return X @ self.weights.T + self.bias[None, :]

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.scores(X), axis=1)


def train_linear_svm(
    X,
    y,
    lam: float = 1e-4,
    epochs: int = 100,
    seed: int = 0,
    n_classes: int = N_CLASSES,
) -> LinearSvmModel:
    """Minimize lam/2 |w|^2 + mean hinge loss per class, all classes in lockstep.

    The bias is an extra always-one input, so it is regularized along with w.
    Step size at update t is 1/(lam t); each epoch visits the data in a
    permutation drawn from ``seed``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if len(np.unique(y)) < 2:
        raise DegenerateData("linear SVM needs at least two classes in the training data")
    n, d = X.shape
    Xa = np.hstack([X, np.ones((n, 1))])
    Y = np.where(y[:, None] == np.arange(n_classes)[None, :], 1.0, -1.0)
    W = np.zeros((n_classes, d + 1))
    radius = 1.0 / np.sqrt(lam)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            x, yi = Xa[i], Y[i]
            violated = yi * (W @ x) < 1.0
            W *= 1.0 - eta * lam
            if violated.any():
                W[violated] += eta * yi[violated, None] * x[None, :]
            norms = np.linalg.norm(W, axis=1)
            big = norms > radius
            if big.any():
                W[big] *= (radius / norms[big])[:, None]
    return LinearSvmModel(W[:, :d].copy(), W[:, d].copy(), lam, epochs, seed)


def predict_linear(model: LinearSvmModel, v) -> tuple[int, np.ndarray]:
    s = model.scores(np.asarray(v, dtype=np.float64).reshape(1, -1))[0]
    return int(np.argmax(s)), s
