"""Self-contained classifier model files.

Layout: magic ``PRCM``, version byte, one length-prefixed UTF-8 JSON payload,
CRC32 trailer. JSON floats use shortest round-trip repr, so load(save(m))
reproduces every parameter bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..binio import Reader, Writer, atomic_write_bytes
from ..errors import CorruptModel, SchemaMismatch
from ..features import Scaler, transform
from .gnb import GnbModel
from .svm import LinearSvmModel
from .tree import ForestConfig, ForestModel, TreeModel

MAGIC = b"PRCM"
FORMAT_VERSION = 1


@dataclass
class ClassifierModel:
    kind: str
    estimator: object
    schema: list[str]
    scaler: Scaler
    meta: dict = field(default_factory=dict)

    def scores(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != len(self.schema):
            raise SchemaMismatch(f"vector dimension {X.shape[1]} != schema dimension {len(self.schema)}")
        return self.estimator.scores(transform(self.scaler, X))

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return self.estimator.predict(transform(self.scaler, X))


def _tree_to_dict(t: TreeModel) -> dict:
    return {
        "feature": t.feature.tolist(),
        "threshold": t.threshold.tolist(),
        "left": t.left.tolist(),
        "right": t.right.tolist(),
        "counts": t.counts.tolist(),
        "dim": t.dim,
    }


def _tree_from_dict(d: dict) -> TreeModel:
    return TreeModel(
        np.array(d["feature"], dtype=np.int64),
        np.array(d["threshold"], dtype=np.float64),
        np.array(d["left"], dtype=np.int64),
        np.array(d["right"], dtype=np.int64),
        np.array(d["counts"], dtype=np.int64).reshape(len(d["feature"]), -1),
        int(d["dim"]),
    )


def _estimator_to_dict(est) -> dict:
    if isinstance(est, GnbModel):
        return {
            "priors": est.priors.tolist(),
            "means": est.means.tolist(),
            "variances": est.variances.tolist(),
            "var_floor": est.var_floor,
        }
    if isinstance(est, LinearSvmModel):
        return {
            "weights": est.weights.tolist(),
            "bias": est.bias.tolist(),
            "lam": est.lam,
            "epochs": est.epochs,
            "seed": est.seed,
        }
    if isinstance(est, TreeModel):
        return _tree_to_dict(est)
    if isinstance(est, ForestModel):
        return {
            "trees": [_tree_to_dict(t) for t in est.trees],
            "tree_seeds": est.tree_seeds,
            "config": asdict(est.config),
        }
    raise TypeError(f"cannot serialize estimator of type {type(est).__name__}")


def _estimator_from_dict(kind: str, d: dict):
    f64 = lambda v: np.array(v, dtype=np.float64)  # noqa: E731
    if kind == "gnb":
        return GnbModel(f64(d["priors"]), f64(d["means"]), f64(d["variances"]), d["var_floor"])
    if kind == "linear-svm":
        return LinearSvmModel(f64(d["weights"]), f64(d["bias"]), d["lam"], d["epochs"], d["seed"])
    if kind == "tree":
        return _tree_from_dict(d)
    if kind == "forest":
        return ForestModel([_tree_from_dict(t) for t in d["trees"]], list(d["tree_seeds"]), ForestConfig(**d["config"]))
    raise CorruptModel(f"unknown classifier kind {kind!r}")


def dumps(model: ClassifierModel) -> bytes:
    payload = {
        "kind": model.kind,
        "schema": model.schema,
        "scaler": {"mean": model.scaler.mean.tolist(), "std": model.scaler.std.tolist()},
        "params": _estimator_to_dict(model.estimator),
        "meta": model.meta,
    }
    w = Writer(MAGIC, FORMAT_VERSION)
    w.blob(json.dumps(payload, ensure_ascii=False, sort_keys=True, allow_nan=False).encode("utf-8"))
    return w.getvalue()


def loads(data: bytes, what: str = "classifier model") -> ClassifierModel:
    r = Reader(data, MAGIC, FORMAT_VERSION, what)
    raw = r.blob()
    r.done()
    try:
        p = json.loads(raw.decode("utf-8"))
        scaler = Scaler(np.array(p["scaler"]["mean"], dtype=np.float64), np.array(p["scaler"]["std"], dtype=np.float64))
        est = _estimator_from_dict(p["kind"], p["params"])
        return ClassifierModel(p["kind"], est, list(p["schema"]), scaler, p.get("meta", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"{what}: malformed payload ({exc})") from exc


def save_model(model: ClassifierModel, path: str | Path) -> None:
    atomic_write_bytes(path, dumps(model))


def load_model(path: str | Path) -> ClassifierModel:
    return loads(Path(path).read_bytes(), what=str(path))
