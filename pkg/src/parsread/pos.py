"""Lexicon + suffix-rule part-of-speech tagging and POS features.

Any object with a ``tag(doc) -> TaggedDocument`` method can stand in for
``LexiconTagger`` wherever a tagger is expected.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from .binio import Reader, Writer, atomic_write_bytes
from .errors import CorruptModel, EmptyCorpus, EmptyDocument, ParsreadError, UnknownTag
from .textcore import TokenizedDocument, normalize

MAGIC = b"PRTG"
FORMAT_VERSION = 1

DEFAULT_TAGS = ("N", "V", "ADJ", "ADV", "P", "PRO", "CONJ", "NUM", "PUNC", "OTHER")
DEFAULT_TAG = "N"

# first match wins, so longer suffixes come first
DEFAULT_SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("ترین", "ADJ"),
    ("تر", "ADJ"),
    ("انه", "ADV"),
    ("\u200cها", "N"),
    ("ها", "N"),
    ("یم", "V"),
    ("ید", "V"),
    ("ند", "V"),
    ("یی", "ADJ"),
    *((str(d), "NUM") for d in range(10)),
)


@dataclass(frozen=True)
class TagSet:
    tags: tuple[str, ...] = DEFAULT_TAGS

    def __post_init__(self):
        if not self.tags:
            raise ValueError("tag set must be non-empty")
        if len(set(self.tags)) != len(self.tags):
            raise ValueError("tag symbols must be unique")

    def __contains__(self, tag: str) -> bool:
        return tag in self.tags

    def __len__(self) -> int:
        return len(self.tags)

    def index(self, tag: str) -> int:
        return self.tags.index(tag)


DEFAULT_TAGSET = TagSet()


@dataclass(frozen=True)
class TaggedDocument:
    id: str
    sentences: tuple[tuple[tuple[str, str], ...], ...]

    @property
    def pairs(self) -> list[tuple[str, str]]:
        return [p for s in self.sentences for p in s]


class Tagger(Protocol):
    tagset: TagSet

    def tag(self, doc: TokenizedDocument) -> TaggedDocument: ...


@dataclass(frozen=True)
class LexiconTagger:
    lexicon: dict[str, str] = field(repr=False)
    suffix_rules: tuple[tuple[str, str], ...] = DEFAULT_SUFFIX_RULES
    default_tag: str = DEFAULT_TAG
    tagset: TagSet = DEFAULT_TAGSET

    def __post_init__(self):
        targets = [*self.lexicon.values(), *(t for _, t in self.suffix_rules), self.default_tag]
        bad = sorted({t for t in targets if t not in self.tagset})
        if bad:
            raise UnknownTag(f"tags outside the tag set: {bad}")

    def tag_word(self, word: str) -> str:
        hit = self.lexicon.get(word)
        if hit is not None:
            return hit
        for suffix, tag in self.suffix_rules:
            if word.endswith(suffix):
                return tag
        return self.default_tag

    def tag(self, doc: TokenizedDocument) -> TaggedDocument:
        return TaggedDocument(
            doc.id,
            tuple(tuple((w, self.tag_word(w)) for w in sent) for sent in doc.sentences),
        )


def train_tagger(
    tagged_corpus: Iterable[TaggedDocument],
    tagset: TagSet = DEFAULT_TAGSET,
    suffix_rules: Sequence[tuple[str, str]] = DEFAULT_SUFFIX_RULES,
    default_tag: str = DEFAULT_TAG,
) -> LexiconTagger:
    counts: dict[str, Counter[str]] = defaultdict(Counter)
    n_docs = 0
    for doc in tagged_corpus:
        n_docs += 1
        for word, t in doc.pairs:
            if t not in tagset:
                raise UnknownTag(f"tag {t!r} (word {word!r}) is not in the tag set")
            counts[word][t] += 1
    if n_docs == 0 or not counts:
        raise EmptyCorpus("tagged corpus is empty")
    lexicon = {
        word: min(c, key=lambda t: (-c[t], tagset.index(t))) for word, c in counts.items()
    }
    return LexiconTagger(lexicon, tuple(suffix_rules), default_tag, tagset)


def tag(tagger: Tagger, doc: TokenizedDocument) -> TaggedDocument:
    return tagger.tag(doc)


def substitute_pos(tagged: TaggedDocument) -> TokenizedDocument:
    sentences = tuple(tuple(t for _, t in sent) for sent in tagged.sentences)
    n_chars = sum(len(t) for s in sentences for t in s)
    return TokenizedDocument(tagged.id, sentences, n_chars, n_chars)


def pos_percentages(tagged: TaggedDocument, tagset: TagSet = DEFAULT_TAGSET) -> list[float]:
    tags = [t for _, t in tagged.pairs]
    if not tags:
        raise EmptyDocument(f"document {tagged.id!r} has no words")
    c = Counter(tags)
    return [c[t] / len(tags) for t in tagset.tags]


# --- pre-tagged corpus ingestion ---------------------------------------------


def parse_tagged_lines(lines: Iterable[str], doc_prefix: str = "tagged") -> list[TaggedDocument]:
    """Parse ``word/TAG`` lines; one sentence per line, blank lines end a document."""
    docs: list[TaggedDocument] = []
    current: list[tuple[tuple[str, str], ...]] = []

    def flush():
        if current:
            docs.append(TaggedDocument(f"{doc_prefix}-{len(docs)}", tuple(current)))
            current.clear()

    for line in lines:
        line = line.strip()
        if not line:
            flush()
            continue
        if line.startswith("#"):
            continue
        sent = []
        for item in line.split():
            word, sep, t = item.rpartition("/")
            if not sep or not word:
                raise ParsreadError(f"malformed tagged token {item!r}")
            try:
                word = normalize(word)
            except EmptyDocument:
                continue
            sent.append((word, t))
        if sent:
            current.append(tuple(sent))
    flush()
    return docs


def load_tagged_corpus(path: str | Path) -> list[TaggedDocument]:
    with open(path, encoding="utf-8") as fh:
        return parse_tagged_lines(fh, Path(path).stem)


def load_tagset(path: str | Path) -> TagSet:
    with open(path, encoding="utf-8") as fh:
        tags = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    return TagSet(tuple(tags))


# --- serialization -----------------------------------------------------------


def dumps(tagger: LexiconTagger) -> bytes:
    w = Writer(MAGIC, FORMAT_VERSION)
    w.u32(len(tagger.tagset))
    for t in tagger.tagset.tags:
        w.str(t)
    w.str(tagger.default_tag)
    w.u32(len(tagger.suffix_rules))
    for suffix, t in tagger.suffix_rules:
        w.str(suffix)
        w.str(t)
    w.u64(len(tagger.lexicon))
    for word in sorted(tagger.lexicon):
        w.str(word)
        w.str(tagger.lexicon[word])
    return w.getvalue()


def loads(data: bytes, what: str = "tagger") -> LexiconTagger:
    r = Reader(data, MAGIC, FORMAT_VERSION, what)
    tags = tuple(r.str() for _ in range(r.u32()))
    default_tag = r.str()
    rules = tuple((r.str(), r.str()) for _ in range(r.u32()))
    lexicon = {}
    for _ in range(r.u64()):
        word = r.str()
        lexicon[word] = r.str()
    r.done()
    try:
        return LexiconTagger(lexicon, rules, default_tag, TagSet(tags))
    except (ValueError, UnknownTag) as exc:
        raise CorruptModel(f"{what}: {exc}") from exc


def save(tagger: LexiconTagger, path: str | Path) -> None:
    atomic_write_bytes(path, dumps(tagger))


def load(path: str | Path) -> LexiconTagger:
    return loads(Path(path).read_bytes(), what=str(path))
