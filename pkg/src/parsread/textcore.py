"""Persian-aware normalization, segmentation, tokenization and surface statistics."""

from __future__ import annotations

import json
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .errors import EmptyDocument, ParsreadError

ZWNJ = "\u200c"

_CHAR_MAP = {
    "\u0643": "ک",  # arabic kaf -> keheh
    "\u064a": "ی",  # arabic yeh -> farsi yeh
    "\u0649": "ی",  # alef maksura -> farsi yeh
    "\u200b": " ",
    "\u00a0": " ",
    "\u202f": " ",
    "\ufeff": "",
    "\u0640": "",  # tatweel
}
for _i in range(10):
    _CHAR_MAP[chr(0x0660 + _i)] = str(_i)
    _CHAR_MAP[chr(0x06F0 + _i)] = str(_i)
_TRANSLATION = str.maketrans(_CHAR_MAP)

_ZWNJ_RUN = re.compile(ZWNJ + "{2,}")
_ZWNJ_AT_SPACE = re.compile(rf"{ZWNJ}(?=\s)|(?<=\s){ZWNJ}")
_WS_RUN = re.compile(r"\s+")

DEFAULT_TERMINATORS = frozenset({".", "!", "?", "؟", "‼", "…"})
PARAGRAPH_BREAK = "\n\n"

_TOKEN_RE = re.compile(rf"[^\W_]+(?:{ZWNJ}[^\W_]+)*")

# letters carrying a vowel nucleus; word-initial alef marks the vowel onset
PERSIAN_VOWEL_LETTERS = frozenset("اآوی")
_HEH = "ه"
_LATIN_VOWEL_RUN = re.compile(r"[aeiouy]+", re.IGNORECASE)


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str


@dataclass(frozen=True)
class TokenizedDocument:
    """Normalized text as sentences of word tokens.

    ``char_count`` counts visible non-whitespace codepoints of the source
    text (ZWNJ excluded); ``letter_count`` counts alphabetic codepoints of
    the tokens only.
    """

    id: str
    sentences: tuple[tuple[str, ...], ...]
    char_count: int = 0
    letter_count: int = 0

    @property
    def tokens(self) -> list[str]:
        return [t for s in self.sentences for t in s]

    @property
    def n_words(self) -> int:
        return sum(len(s) for s in self.sentences)

    def __len__(self) -> int:
        return self.n_words


@dataclass(frozen=True)
class TextStatistics:
    letters: int = 0
    words: int = 0
    sentences: int = 0
    syllables: int = 0
    complex_words: int = 0
    difficult_words: int = 0
    unique_words: int = 0
    characters: int = 0


def _strip_marks(text: str) -> str:
    return "".join(ch for ch in text if unicodedata.category(ch) != "Mn")


def _collapse_ws(match: re.Match[str]) -> str:
    return PARAGRAPH_BREAK if match.group(0).count("\n") >= 2 else " "


def normalize(raw: RawDocument | str) -> str:
    """Canonical Persian form of ``raw``; idempotent.

    Raises EmptyDocument when nothing but whitespace and marks remain.
    """
    text = raw.text if isinstance(raw, RawDocument) else raw
    text = _strip_marks(text.translate(_TRANSLATION))
    text = _ZWNJ_RUN.sub(ZWNJ, text)
    text = _ZWNJ_AT_SPACE.sub("", text)
    text = _WS_RUN.sub(_collapse_ws, text)
    text = text.strip().strip(ZWNJ).strip()
    if not text:
        raise EmptyDocument("document is empty after normalization")
    return text


def split_sentences(
    text: str, terminators: Iterable[str] = DEFAULT_TERMINATORS
) -> list[str]:
    if not text:
        return []
    term = "".join(re.escape(t) for t in sorted(terminators) if t != ".")
    # a dot between digits is a decimal point, not a boundary
    parts = [r"(?<!\d)\.", r"\.(?!\d)", re.escape(PARAGRAPH_BREAK)]
    if term:
        parts.insert(0, f"[{term}]")
    pattern = re.compile("|".join(parts))
    out = []
    for chunk in pattern.split(text):
        chunk = chunk.strip()
        if chunk and _TOKEN_RE.search(chunk):
            out.append(chunk)
    return out


def tokenize(sentence: str) -> list[str]:
    return _TOKEN_RE.findall(sentence)


def count_syllables(token: str) -> int:
    """Vowel-nucleus estimate: long-vowel letters, word-final heh, Latin vowel runs.

    Returns at least 1 for any token containing a letter, 0 otherwise.
    """
    if not any(ch.isalpha() for ch in token):
        return 0
    count = 0
    for part in token.split(ZWNJ):
        count += sum(1 for ch in part if ch in PERSIAN_VOWEL_LETTERS)
        if len(part) > 1 and part.endswith(_HEH):
            count += 1
        count += len(_LATIN_VOWEL_RUN.findall(part))
    return max(count, 1)


def visible_length(token: str) -> int:
    return sum(1 for ch in token if ch != ZWNJ)


def _letters(token: str) -> int:
    return sum(1 for ch in token if ch.isalpha())


def build_document(
    doc: RawDocument, terminators: Iterable[str] = DEFAULT_TERMINATORS
) -> TokenizedDocument:
    text = normalize(doc)
    sentences = []
    for s in split_sentences(text, terminators):
        toks = tokenize(s)
        if toks:
            sentences.append(tuple(toks))
    chars = sum(1 for ch in text if not ch.isspace() and ch != ZWNJ)
    letters = sum(_letters(t) for s in sentences for t in s)
    return TokenizedDocument(doc.id, tuple(sentences), chars, letters)


def remove_stopwords(doc: TokenizedDocument, stoplist: set[str] | frozenset[str]) -> TokenizedDocument:
    kept_sentences = []
    removed_chars = removed_letters = 0
    for sentence in doc.sentences:
        kept = []
        for tok in sentence:
            if tok.casefold() in stoplist:
                removed_chars += visible_length(tok)
                removed_letters += _letters(tok)
            else:
                kept.append(tok)
        if kept:
            kept_sentences.append(tuple(kept))
    return TokenizedDocument(
        doc.id,
        tuple(kept_sentences),
        max(doc.char_count - removed_chars, 0),
        max(doc.letter_count - removed_letters, 0),
    )


def compute_statistics(
    doc: TokenizedDocument,
    complex_list: set[str] | frozenset[str] = frozenset(),
    familiar_list: set[str] | frozenset[str] = frozenset(),
    syllable_counter: Callable[[str], int] = count_syllables,
) -> TextStatistics:
    tokens = doc.tokens
    if not tokens:
        raise EmptyDocument(f"document {doc.id!r} has no words")
    folded = [t.casefold() for t in tokens]
    return TextStatistics(
        letters=doc.letter_count,
        words=len(tokens),
        sentences=len(doc.sentences),
        syllables=sum(syllable_counter(t) for t in tokens),
        complex_words=sum(1 for t in folded if t in complex_list),
        difficult_words=sum(1 for t in folded if t not in familiar_list),
        unique_words=len(set(folded)),
        characters=doc.char_count,
    )


# --- corpus and word-list IO -------------------------------------------------


def iter_corpus(path: str | Path) -> Iterator[RawDocument]:
    """Yield documents from a directory of ``.txt`` files or a JSONL file."""
    path = Path(path)
    if path.is_dir():
        for f in sorted(path.glob("*.txt")):
            yield RawDocument(f.stem, f.read_text(encoding="utf-8"))
        return
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                yield RawDocument(str(rec["id"]), str(rec["text"]))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParsreadError(f"{path}:{lineno}: bad corpus record ({exc})") from exc


def load_corpus(path: str | Path) -> list[TokenizedDocument]:
    docs = []
    for raw in iter_corpus(path):
        try:
            docs.append(build_document(raw))
        except EmptyDocument:
            continue
    return docs


def parse_wordlist(lines: Iterable[str]) -> frozenset[str]:
    words = set()
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            words.add(normalize(line).casefold())
        except EmptyDocument:
            continue
    return frozenset(words)


def load_wordlist(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return parse_wordlist(fh)


def write_wordlist(words: Iterable[str], path: str | Path, header: str | None = None) -> None:
    lines = [f"# {header}"] if header else []
    lines.extend(sorted(words))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def default_stopwords() -> frozenset[str]:
    from importlib import resources

    text = resources.files("parsread").joinpath("data/stopwords_fa.txt").read_text(encoding="utf-8")
    return parse_wordlist(text.splitlines())


@dataclass(frozen=True)
class WordLists:
    complex: frozenset[str] = field(default_factory=frozenset)
    familiar: frozenset[str] = field(default_factory=frozenset)


def build_wordlists(
    docs: Iterable[TokenizedDocument],
    min_syllables: int = 4,
    n_familiar: int = 1000,
    syllable_counter: Callable[[str], int] = count_syllables,
) -> WordLists:
    """Corpus-derived defaults: long words are complex, frequent words familiar."""
    freq: Counter[str] = Counter()
    for doc in docs:
        freq.update(t.casefold() for t in doc.tokens)
    complex_words = frozenset(w for w in freq if syllable_counter(w) >= min_syllables)
    ranked = sorted(freq.items(), key=lambda kv: (-kv[1], kv[0]))
    familiar = frozenset(w for w, _ in ranked[:n_familiar])
    return WordLists(complex_words, familiar)
