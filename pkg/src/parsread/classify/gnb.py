from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..errors import MissingClass, SchemaMismatch

N_CLASSES = 3
VAR_FLOOR = 1e-9


@dataclass
class GnbModel:
    priors: np.ndarray  # (C,)
    means: np.ndarray  # (C, D)
    variances: np.ndarray  # (C, D), floored
    var_floor: float = VAR_FLOOR

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.dim:
            raise SchemaMismatch(f"vector dimension {X.shape[1]} != model dimension {self.dim}")
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.priors)
        norm = -0.5 * np.sum(np.log(2.0 * np.pi * self.variances), axis=1)
        diff = X[:, None, :] - self.means[None, :, :]
        quad = -0.5 * np.sum(diff * diff / self.variances[None, :, :], axis=2)
        return log_prior[None, :] + norm[None, :] + quad

    def scores(self, X) -> np.ndarray:
        """Log posteriors, one row per example."""
        jll = self.joint_log_likelihood(X)
        return jll - logsumexp(jll, axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.joint_log_likelihood(X), axis=1)


def train_gnb(X, y, var_floor: float = VAR_FLOOR, n_classes: int = N_CLASSES) -> GnbModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    missing = [c for c in range(n_classes) if not np.any(y == c)]
    if missing:
        raise MissingClass(f"no training examples for classes {missing}")
    priors = np.array([np.mean(y == c) for c in range(n_classes)])
    means = np.vstack([X[y == c].mean(axis=0) for c in range(n_classes)])
    variances = np.vstack([X[y == c].var(axis=0) for c in range(n_classes)])
    return GnbModel(priors, means, np.maximum(variances, var_floor), var_floor)


def predict_gnb(model: GnbModel, v) -> tuple[int, np.ndarray]:
    x = np.asarray(v, dtype=np.float64).reshape(1, -1)
    return int(model.predict(x)[0]), model.scores(x)[0]
