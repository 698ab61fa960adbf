"""Frequency n-gram models over word, character or POS-tag units.

No smoothing: an n-gram never seen in training has frequency 0. Word and POS
n-grams stay inside a sentence; character n-grams stay inside a token.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .binio import Reader, Writer, atomic_write_bytes
from .errors import CorruptModel, EmptyCorpus, EmptyDocument, OrderMismatch
from .textcore import TokenizedDocument

MAGIC = b"PRLM"
FORMAT_VERSION = 1
MAX_ORDER = 5

Key = tuple[str, ...]


class Unit(str, enum.Enum):
    WORD = "word"
    CHAR = "char"
    POS = "pos"


_UNIT_CODES = {Unit.WORD: 0, Unit.CHAR: 1, Unit.POS: 2}
_CODE_UNITS = {v: k for k, v in _UNIT_CODES.items()}


@dataclass(frozen=True)
class NgramModel:
    unit: Unit
    order: int
    counts: dict[Key, int] = field(repr=False)
    total: int

    @property
    def vocab_size(self) -> int:
        return len(self.counts)

    def frequency(self, key: Sequence[str] | str) -> float:
        return frequency(self, key)


@dataclass(frozen=True)
class FrequencyStats:
    mean: float = 0.0
    variance: float = 0.0
    n_evaluated: int = 0


def iter_ngrams(doc: TokenizedDocument, unit: Unit | str, order: int) -> Iterator[Key]:
    """Sliding windows exactly as training enumerates them."""
    unit = Unit(unit)
    if unit is Unit.CHAR:
        for tok in doc.tokens:
            for i in range(len(tok) - order + 1):
                yield tuple(tok[i : i + order])
    else:
        for sent in doc.sentences:
            for i in range(len(sent) - order + 1):
                yield tuple(sent[i : i + order])


def _check_order(order: int) -> None:
    if not 1 <= order <= MAX_ORDER:
        raise OrderMismatch(f"order must be in [1, {MAX_ORDER}], got {order}")


def train(corpus: Iterable[TokenizedDocument], unit: Unit | str, order: int) -> NgramModel:
    _check_order(order)
    unit = Unit(unit)
    counts: Counter[Key] = Counter()
    n_docs = 0
    for doc in corpus:
        n_docs += 1
        counts.update(iter_ngrams(doc, unit, order))
    if n_docs == 0:
        raise EmptyCorpus("cannot train an n-gram model on an empty corpus")
    total = sum(counts.values())
    if total == 0:
        raise EmptyCorpus(f"corpus has no {unit.value} {order}-grams")
    return NgramModel(unit, order, dict(counts), total)


def _as_key(model: NgramModel, key: Sequence[str] | str) -> Key:
    if isinstance(key, str):
        key = tuple(key) if model.unit is Unit.CHAR else tuple(key.split())
    else:
        key = tuple(key)
    if len(key) != model.order:
        raise OrderMismatch(f"{len(key)}-gram queried against an order-{model.order} model")
    return key


def frequency(model: NgramModel, key: Sequence[str] | str) -> float:
    return model.counts.get(_as_key(model, key), 0) / model.total


def _mean_var(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, var


def doc_frequency_stats(model: NgramModel, doc: TokenizedDocument) -> FrequencyStats:
    if doc.n_words == 0:
        raise EmptyDocument(f"document {doc.id!r} has no words")
    freqs = [model.counts.get(k, 0) / model.total for k in iter_ngrams(doc, model.unit, model.order)]
    if not freqs:
        return FrequencyStats()
    mean, var = _mean_var(freqs)
    return FrequencyStats(mean, var, len(freqs))


def extreme_unigram_means(model: NgramModel, doc: TokenizedDocument, k: int) -> tuple[float, float]:
    """Mean frequency of the k most and the k least frequent distinct doc tokens.

    Unseen tokens take part in the minimum with frequency 0.
    """
    if model.order != 1:
        raise OrderMismatch("extreme unigram means need an order-1 model")
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"k must be in [1, {MAX_ORDER}], got {k}")
    distinct = set(doc.tokens)
    if not distinct:
        raise EmptyDocument(f"document {doc.id!r} has no words")
    freqs = sorted((model.counts.get((t,), 0) / model.total for t in distinct), reverse=True)
    top, bottom = freqs[:k], freqs[-k:]
    return math.fsum(top) / len(top), math.fsum(bottom) / len(bottom)


def dumps(model: NgramModel) -> bytes:
    w = Writer(MAGIC, FORMAT_VERSION)
    w.u8(_UNIT_CODES[model.unit])
    w.u8(model.order)
    w.u64(model.total)
    w.u64(len(model.counts))
    for key in sorted(model.counts):
        for part in key:
            w.str(part)
        w.u64(model.counts[key])
    return w.getvalue()


def loads(data: bytes, what: str = "n-gram model") -> NgramModel:
    r = Reader(data, MAGIC, FORMAT_VERSION, what)
    code, order = r.u8(), r.u8()
    if code not in _CODE_UNITS or not 1 <= order <= MAX_ORDER:
        raise CorruptModel(f"{what}: bad unit/order header")
    total, n = r.u64(), r.u64()
    counts = {}
    for _ in range(n):
        key = tuple(r.str() for _ in range(order))
        counts[key] = r.u64()
    r.done()
    if sum(counts.values()) != total or any(c <= 0 for c in counts.values()):
        raise CorruptModel(f"{what}: counts inconsistent with header total")
    return NgramModel(_CODE_UNITS[code], order, counts, total)


def save(model: NgramModel, path: str | Path) -> None:
    atomic_write_bytes(path, dumps(model))


def load(path: str | Path) -> NgramModel:
    return loads(Path(path).read_bytes(), what=str(path))
