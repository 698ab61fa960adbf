"""Feature vectors for readability classification, plus z-score scaling."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import formulas, ngram, pos
from .binio import atomic_write_text
from .errors import EmptyDocument, InsufficientData, MissingModel, SchemaMismatch
from .ngram import NgramModel, Unit
from .textcore import (
    TokenizedDocument,
    WordLists,
    build_wordlists,
    compute_statistics,
    default_stopwords,
    load_wordlist,
    remove_stopwords,
    visible_length,
    write_wordlist,
)

ORDERS = (1, 2, 3, 4, 5)
LEVELS = ("easy", "medium", "hard")

# Rows of the published feature list, in published order. The third row
# repeats the first verbatim; it is read as average *word* length.
TABLE_ROWS = (
    "Average length of sentences in the text",
    "Variance of sentences length in the text",
    "Average length of sentences in the text (second occurrence: word length)",
    "Variance of words length in the text",
    "Average word n-gram model frequency (n = 1 to 5)",
    "Average character n-gram model frequency (n = 1 to 5)",
    "Variance of word n-gram model frequency (n = 1 to 5)",
    "Variance of character n-gram model frequency (n = 1 to 5)",
    "Number of sentences in the text",
    "Number of words in the text",
    "Number of characters in the text",
    "Number of unique words in the text",
    "Entropy (number of unique words divided by total number of words)",
    "Average of n-max unigram model frequency words (n = 1 to 5)",
    "Average of n-min unigram model frequency words (n = 1 to 5)",
    "Percentage of each part of speech tagged words to the total number of words",
    "Average n-gram part of speech model frequency (n = 1 to 5)",
    "Variance of n-gram part of speech model frequency (n = 1 to 5)",
    "User reading ability",
)
FORMULA_ROW = "Classical readability formulas (supplementary)"


@dataclass(frozen=True)
class FeatureEntry:
    name: str
    source: str
    row: str


@dataclass(frozen=True)
class FeatureSchema:
    entries: tuple[FeatureEntry, ...]

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    @property
    def dim(self) -> int:
        return len(self.entries)

    def to_rows(self) -> list[dict[str, str]]:
        return [{"index": str(i), "name": e.name, "source": e.source, "row": e.row} for i, e in enumerate(self.entries)]


def build_schema(tagset: pos.TagSet = pos.DEFAULT_TAGSET) -> FeatureSchema:
    e: list[FeatureEntry] = []

    def add(name: str, source: str, row: int | str) -> None:
        e.append(FeatureEntry(name, source, TABLE_ROWS[row] if isinstance(row, int) else row))

    add("sentence_length_mean", "textcore", 0)
    add("sentence_length_var", "textcore", 1)
    add("word_length_mean", "textcore", 2)
    add("word_length_var", "textcore", 3)
    for n in ORDERS:
        add(f"word_lm_mean_n{n}", f"ngram:word:{n}", 4)
        add(f"word_lm_var_n{n}", f"ngram:word:{n}", 6)
    for n in ORDERS:
        add(f"char_lm_mean_n{n}", f"ngram:char:{n}", 5)
        add(f"char_lm_var_n{n}", f"ngram:char:{n}", 7)
    add("n_sentences", "textcore", 8)
    add("n_words", "textcore", 9)
    add("n_characters", "textcore", 10)
    add("n_unique_words", "textcore", 11)
    add("entropy", "textcore", 12)
    for f in formulas.Formula:
        add(f.value, "formulas", FORMULA_ROW)
    for k in ORDERS:
        add(f"unigram_max_mean_k{k}", "ngram:word:1", 13)
    for k in ORDERS:
        add(f"unigram_min_mean_k{k}", "ngram:word:1", 14)
    for t in tagset.tags:
        add(f"pos_pct_{t}", "pos", 15)
    for n in ORDERS:
        add(f"pos_lm_mean_n{n}", f"ngram:pos:{n}", 16)
        add(f"pos_lm_var_n{n}", f"ngram:pos:{n}", 17)
    for level in LEVELS:
        add(f"reading_{level}", "reading_ability", 18)
    return FeatureSchema(tuple(e))


@dataclass(frozen=True)
class ReadingAbility:
    easy: float
    medium: float
    hard: float

    def __post_init__(self):
        vals = (self.easy, self.medium, self.hard)
        if any(not 0.0 <= v <= 1.0 for v in vals) or abs(sum(vals) - 1.0) > 1e-9:
            raise ValueError(f"reading ability must be fractions summing to 1, got {vals}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.easy, self.medium, self.hard)

    @classmethod
    def mean(cls, abilities: Sequence["ReadingAbility"]) -> "ReadingAbility":
        if not abilities:
            return DEFAULT_READING
        n = len(abilities)
        e, m, h = (math.fsum(a.as_tuple()[i] for a in abilities) / n for i in range(3))
        return cls(e, m, h)


# population label portions of the original crowdsourced collection
DEFAULT_READING = ReadingAbility(0.54, 0.32, 0.14)


@dataclass
class FeatureVector:
    values: np.ndarray
    schema: FeatureSchema

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.schema.dim,):
            raise SchemaMismatch(f"vector of length {self.values.shape} for schema of dimension {self.schema.dim}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.schema.names, self.values.tolist()))


@dataclass
class FeatureResources:
    """Everything ``extract`` needs besides the document itself."""

    word_lms: dict[int, NgramModel]
    char_lms: dict[int, NgramModel]
    pos_lms: dict[int, NgramModel]
    tagger: pos.Tagger
    wordlists: WordLists = field(default_factory=WordLists)
    stopwords: frozenset[str] = frozenset()
    remove_stopwords: bool = True
    tag_before_stopwords: bool = True
    classical_gunning: bool = False

    @property
    def schema(self) -> FeatureSchema:
        return build_schema(self.tagger.tagset)

    def check(self) -> None:
        problems = []
        for unit, table in ((Unit.WORD, self.word_lms), (Unit.CHAR, self.char_lms), (Unit.POS, self.pos_lms)):
            for n in ORDERS:
                m = table.get(n)
                if m is None:
                    problems.append(f"{unit.value} n={n} missing")
                elif m.unit is not unit or m.order != n:
                    problems.append(f"{unit.value} n={n} slot holds a {m.unit.value} order-{m.order} model")
        if problems:
            raise MissingModel("incomplete language-model set: " + "; ".join(problems))


def _mean_var(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    return mean, math.fsum((v - mean) ** 2 for v in values) / n


def prepare(doc: TokenizedDocument, res: FeatureResources) -> TokenizedDocument:
    return remove_stopwords(doc, res.stopwords) if res.remove_stopwords else doc


def extract(
    doc: TokenizedDocument,
    res: FeatureResources,
    reading: ReadingAbility = DEFAULT_READING,
) -> FeatureVector:
    res.check()
    if doc.n_words == 0:
        raise EmptyDocument(f"document {doc.id!r} has no words")
    work = prepare(doc, res)
    if work.n_words == 0:
        raise EmptyDocument(f"document {doc.id!r} has only stopwords")
    tagged = res.tagger.tag(doc if res.tag_before_stopwords else work)
    pos_doc = pos.substitute_pos(tagged)

    v: list[float] = []
    v.extend(_mean_var([len(s) for s in work.sentences]))
    v.extend(_mean_var([visible_length(t) for t in work.tokens]))
    for table, target in ((res.word_lms, work), (res.char_lms, work)):
        for n in ORDERS:
            st = ngram.doc_frequency_stats(table[n], target)
            v.extend((st.mean, st.variance))
    stats = compute_statistics(work, res.wordlists.complex, res.wordlists.familiar)
    v.extend((stats.sentences, stats.words, stats.characters, stats.unique_words))
    v.append(stats.unique_words / stats.words)
    v.extend(s.value for s in formulas.all_scores(stats, res.classical_gunning))
    extremes = [ngram.extreme_unigram_means(res.word_lms[1], work, k) for k in ORDERS]
    v.extend(mx for mx, _ in extremes)
    v.extend(mn for _, mn in extremes)
    v.extend(pos.pos_percentages(tagged, res.tagger.tagset))
    for n in ORDERS:
        st = ngram.doc_frequency_stats(res.pos_lms[n], pos_doc)
        v.extend((st.mean, st.variance))
    v.extend(reading.as_tuple())
    return FeatureVector(np.array(v, dtype=np.float64), res.schema)


# --- language-model resources on disk ------------------------------------------


def lm_filename(unit: Unit | str, order: int) -> str:
    return f"{Unit(unit).value}-{order}.lm"


def train_resources(
    corpus: Sequence[TokenizedDocument],
    tagger: pos.Tagger,
    stopwords: frozenset[str] | None = None,
    remove_stopwords_first: bool = True,
    tag_before_stopwords: bool = True,
) -> FeatureResources:
    """Train all fifteen language models and the corpus-derived word lists."""
    stop = default_stopwords() if stopwords is None else stopwords
    work = [remove_stopwords(d, stop) if remove_stopwords_first else d for d in corpus]
    work_nonempty = [d for d in work if d.n_words]
    tag_src = corpus if tag_before_stopwords else work_nonempty
    pos_docs = [pos.substitute_pos(tagger.tag(d)) for d in tag_src]
    return FeatureResources(
        word_lms={n: ngram.train(work_nonempty, Unit.WORD, n) for n in ORDERS},
        char_lms={n: ngram.train(work_nonempty, Unit.CHAR, n) for n in ORDERS},
        pos_lms={n: ngram.train(pos_docs, Unit.POS, n) for n in ORDERS},
        tagger=tagger,
        wordlists=build_wordlists(work_nonempty),
        stopwords=stop,
        remove_stopwords=remove_stopwords_first,
        tag_before_stopwords=tag_before_stopwords,
    )


def save_resources(res: FeatureResources, directory: str | Path) -> None:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for unit, table in ((Unit.WORD, res.word_lms), (Unit.CHAR, res.char_lms), (Unit.POS, res.pos_lms)):
        for n, m in table.items():
            ngram.save(m, d / lm_filename(unit, n))
    write_wordlist(res.wordlists.complex, d / "complex.txt", "complex words (>= 4 syllables)")
    write_wordlist(res.wordlists.familiar, d / "familiar.txt", "familiar words (most frequent)")
    write_wordlist(res.stopwords, d / "stopwords.txt", "stopwords applied before featurization")
    manifest = {
        "remove_stopwords": res.remove_stopwords,
        "tag_before_stopwords": res.tag_before_stopwords,
        "classical_gunning": res.classical_gunning,
    }
    atomic_write_text(d / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_resources(directory: str | Path, tagger: pos.Tagger) -> FeatureResources:
    d = Path(directory)
    tables: dict[Unit, dict[int, NgramModel]] = {u: {} for u in Unit}
    for unit in Unit:
        for n in ORDERS:
            p = d / lm_filename(unit, n)
            if not p.exists():
                raise MissingModel(f"language model not found: {p}")
            tables[unit][n] = ngram.load(p)
    manifest_path = d / "manifest.json"
    manifest = json.loads(manifest_path.read_text(encoding="utf-8")) if manifest_path.exists() else {}
    stop_path = d / "stopwords.txt"
    return FeatureResources(
        word_lms=tables[Unit.WORD],
        char_lms=tables[Unit.CHAR],
        pos_lms=tables[Unit.POS],
        tagger=tagger,
        wordlists=WordLists(load_wordlist(d / "complex.txt"), load_wordlist(d / "familiar.txt")),
        stopwords=load_wordlist(stop_path) if stop_path.exists() else default_stopwords(),
        remove_stopwords=manifest.get("remove_stopwords", True),
        tag_before_stopwords=manifest.get("tag_before_stopwords", True),
        classical_gunning=manifest.get("classical_gunning", False),
    )


# --- scaling -----------------------------------------------------------------


@dataclass
class Scaler:
    mean: np.ndarray
    std: np.ndarray

    @property
    def passthrough(self) -> np.ndarray:
        return self.std == 0.0

    @property
    def dim(self) -> int:
        return len(self.mean)


def _as_matrix(dataset) -> np.ndarray:
    if isinstance(dataset, np.ndarray):
        return np.atleast_2d(np.asarray(dataset, dtype=np.float64))
    rows = [v.values if isinstance(v, FeatureVector) else np.asarray(v, dtype=np.float64) for v in dataset]
    if not rows:
        return np.empty((0, 0))
    return np.vstack(rows)


def fit_scaler(dataset) -> Scaler:
    X = _as_matrix(dataset)
    if X.shape[0] < 2:
        raise InsufficientData(f"scaler needs at least 2 vectors, got {X.shape[0]}")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    # exact zero for constant columns; float noise would otherwise blow them up
    std[np.ptp(X, axis=0) == 0] = 0.0
    return Scaler(mean, std)


def transform(scaler: Scaler, v):
    """Standardize a FeatureVector, a 1-D array, or a matrix of row vectors."""
    if isinstance(v, FeatureVector):
        return FeatureVector(transform(scaler, v.values), v.schema)
    X = np.asarray(v, dtype=np.float64)
    if X.shape[-1] != scaler.dim:
        raise SchemaMismatch(f"vector dimension {X.shape[-1]} != scaler dimension {scaler.dim}")
    safe = np.where(scaler.passthrough, 1.0, scaler.std)
    shift = np.where(scaler.passthrough, 0.0, scaler.mean)
    return (X - shift) / safe


# --- dataset files -----------------------------------------------------------


@dataclass
class FeatureDataset:
    schema_names: list[str]
    text_ids: list[str]
    labels: list[int]
    X: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.text_ids)

    def to_json(self) -> str:
        payload = {
            "format": "parsread-features",
            "version": 1,
            "schema": self.schema_names,
            "meta": self.meta,
            "rows": [
                {"text_id": t, "label": LEVELS[y], "features": x.tolist()}
                for t, y, x in zip(self.text_ids, self.labels, self.X)
            ],
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FeatureDataset":
        payload = json.loads(text)
        if payload.get("format") != "parsread-features":
            raise SchemaMismatch("not a parsread feature dataset")
        names = payload["schema"]
        rows = payload["rows"]
        X = np.array([r["features"] for r in rows], dtype=np.float64).reshape(len(rows), len(names))
        return cls(
            names,
            [r["text_id"] for r in rows],
            [LEVELS.index(r["label"]) for r in rows],
            X,
            payload.get("meta", {}),
        )

    def save(self, path: str | Path) -> None:
        atomic_write_text(path, self.to_json())

    @classmethod
    def load(cls, path: str | Path) -> "FeatureDataset":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def export_tsv(
    dataset: Iterable[FeatureVector] | np.ndarray,
    labels: Sequence[str | int],
    path: str | Path,
    schema: FeatureSchema | None = None,
    labels_path: str | Path | None = None,
) -> Path:
    """Write projector-style vectors (with header) and a companion label file."""
    rows = [v.values if isinstance(v, FeatureVector) else np.asarray(v) for v in dataset]
    if schema is None:
        if rows and isinstance(dataset, list) and isinstance(dataset[0], FeatureVector):
            schema = dataset[0].schema
        else:
            schema = build_schema()
    if len(labels) != len(rows):
        raise SchemaMismatch(f"{len(rows)} vectors but {len(labels)} labels")
    path = Path(path)
    labels_path = Path(labels_path) if labels_path else path.with_suffix(".labels.tsv")
    lines = ["\t".join(schema.names)]
    for r in rows:
        if len(r) != schema.dim:
            raise SchemaMismatch(f"row of length {len(r)} for schema of dimension {schema.dim}")
        lines.append("\t".join(repr(float(x)) for x in r))
    atomic_write_text(path, "\n".join(lines) + "\n")
    label_text = "".join(f"{LEVELS[l] if isinstance(l, int) else l}\n" for l in labels)
    atomic_write_text(labels_path, label_text)
    return labels_path


def read_tsv(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader)
        data = [[float(x) for x in row] for row in reader if row]
    return header, np.array(data, dtype=np.float64).reshape(len(data), len(header))
