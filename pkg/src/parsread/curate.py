"""Turn crowdsourced readability votes into a curated labeled dataset.

Pipeline order: ingest -> voter profiles -> outlier flagging -> drop flagged
voters' votes -> per-text agreement filter -> dataset rows.
"""

from __future__ import annotations

import json
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .binio import atomic_write_text
from .errors import NoGoldOverlap, NoLabels, ParsreadError, TooFewVoters
from .features import LEVELS, ReadingAbility
from .textcore import RawDocument, build_document

log = logging.getLogger(__name__)

LABEL_INDEX = {name: i for i, name in enumerate(LEVELS)}


@dataclass(frozen=True)
class LabelRecord:
    voter: str
    text: str
    label: int
    ts: datetime
    line: int = 0


@dataclass
class IngestResult:
    records: list[LabelRecord]
    errors: list[tuple[int, str]] = field(default_factory=list)
    duplicates: int = 0


def _parse_ts(value) -> datetime:
    if not isinstance(value, str):
        raise ValueError("ts must be an ISO-8601 string")
    # fromisoformat on 3.10 does not accept a trailing Z
    return datetime.fromisoformat(value[:-1] + "+00:00" if value.endswith("Z") else value)


def _sort_key(ts: datetime) -> float:
    # naive timestamps are treated as UTC so naive and aware logs can mix
    return (ts if ts.tzinfo else ts.replace(tzinfo=timezone.utc)).timestamp()


def ingest(lines: Iterable[str]) -> IngestResult:
    """Validate JSONL vote lines; keep the earliest vote per (voter, text)."""
    best: dict[tuple[str, str], LabelRecord] = {}
    errors: list[tuple[int, str]] = []
    n_valid = 0
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not an object")
            voter, text, label = rec["voter"], rec["text"], rec["label"]
            if not isinstance(voter, str) or not voter or not isinstance(text, str) or not text:
                raise ValueError("voter and text must be non-empty strings")
            if label not in LABEL_INDEX:
                raise ValueError(f"label {label!r} not in {list(LEVELS)}")
            r = LabelRecord(voter, text, LABEL_INDEX[label], _parse_ts(rec["ts"]), lineno)
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            errors.append((lineno, f"{type(exc).__name__}: {exc}"))
            continue
        n_valid += 1
        key = (r.voter, r.text)
        prev = best.get(key)
        if prev is None or _sort_key(r.ts) < _sort_key(prev.ts):
            best[key] = r
    records = sorted(best.values(), key=lambda r: r.line)
    return IngestResult(records, errors, n_valid - len(records))


def ingest_file(path: str | Path) -> IngestResult:
    try:
        with open(path, encoding="utf-8") as fh:
            return ingest(fh)
    except OSError as exc:
        raise ParsreadError(f"cannot read label log {path}: {exc}") from exc


@dataclass(frozen=True)
class Agreement:
    majority: int | None  # None on a tie for the top count
    percent: int
    tie: bool
    n_labels: int


def agreement(labels: Sequence[int | str]) -> Agreement:
    labels = [LABEL_INDEX[l] if isinstance(l, str) else int(l) for l in labels]
    if not labels:
        raise NoLabels("agreement needs at least one label")
    c = Counter(labels)
    top = max(c.values())
    leaders = sorted(lab for lab, n in c.items() if n == top)
    percent = (100 * top) // len(labels)
    if len(leaders) > 1:
        return Agreement(None, percent, True, len(labels))
    return Agreement(leaders[0], percent, False, len(labels))


def reading_ability(records: Sequence[LabelRecord]) -> ReadingAbility:
    if not records:
        raise NoLabels("voter has no labels")
    c = Counter(r.label for r in records)
    n = len(records)
    return ReadingAbility(c[0] / n, c[1] / n, c[2] / n)


@dataclass(frozen=True)
class GoldStandardSet:
    labels: Mapping[str, int]

    def __post_init__(self):
        covered = set(self.labels.values())
        if covered != set(range(len(LEVELS))):
            missing = [LEVELS[i] for i in range(len(LEVELS)) if i not in covered]
            raise ValueError(f"gold set does not cover levels {missing}")

    @property
    def complete(self) -> bool:
        c = Counter(self.labels.values())
        return all(c[i] == 3 for i in range(len(LEVELS))) and len(self.labels) == 9

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "GoldStandardSet":
        labels = {}
        for lineno, line in enumerate(lines, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                labels[str(rec["text"])] = LABEL_INDEX[rec["label"]]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParsreadError(f"gold set line {lineno}: {exc}") from exc
        return cls(labels)

    @classmethod
    def load(cls, path: str | Path) -> "GoldStandardSet":
        with open(path, encoding="utf-8") as fh:
            return cls.from_lines(fh)


def gold_evaluate(records: Sequence[LabelRecord], gold: GoldStandardSet) -> float:
    hits = [r.label == gold.labels[r.text] for r in records if r.text in gold.labels]
    if not hits:
        raise NoGoldOverlap("voter labeled none of the gold texts")
    return sum(hits) / len(hits)


@dataclass
class VoterProfile:
    voter: str
    reading_ability: ReadingAbility
    gold_accuracy: float | None
    n_labels: int
    outlier_flag: bool = False


def build_profiles(records: Sequence[LabelRecord], gold: GoldStandardSet | None = None) -> dict[str, VoterProfile]:
    by_voter: dict[str, list[LabelRecord]] = defaultdict(list)
    for r in records:
        by_voter[r.voter].append(r)
    profiles = {}
    for voter in sorted(by_voter):
        recs = by_voter[voter]
        acc = None
        if gold is not None:
            try:
                acc = gold_evaluate(recs, gold)
            except NoGoldOverlap:
                acc = None
        profiles[voter] = VoterProfile(voter, reading_ability(recs), acc, len(recs))
    return profiles


def detect_outliers(
    profiles: Sequence[VoterProfile] | Mapping[str, VoterProfile],
    z_threshold: float = 3.0,
    gold_floor: float = 1.0 / 3.0,
) -> set[str]:
    """Voters more than ``z_threshold`` population SDs from the mean in any
    reading-ability component, or with gold accuracy below ``gold_floor``."""
    profs = list(profiles.values()) if isinstance(profiles, Mapping) else list(profiles)
    if len(profs) < 3:
        raise TooFewVoters(f"outlier detection needs at least 3 voters, got {len(profs)}")
    n = len(profs)
    flagged = set()
    for comp in range(len(LEVELS)):
        vals = [p.reading_ability.as_tuple()[comp] for p in profs]
        mean = math.fsum(vals) / n
        sd = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / n)
        if sd == 0.0:
            continue
        flagged.update(p.voter for p, v in zip(profs, vals) if abs(v - mean) / sd > z_threshold)
    flagged.update(p.voter for p in profs if p.gold_accuracy is not None and p.gold_accuracy < gold_floor)
    return flagged


@dataclass(frozen=True)
class CuratedEntry:
    text_id: str
    label: int
    agreement: int
    reading_ability: ReadingAbility
    n_labels: int


@dataclass
class CuratedDataset:
    entries: list[CuratedEntry]
    min_labels: int
    threshold: int

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[str]:
        return [e.text_id for e in self.entries]


def filter_curated(
    records: Sequence[LabelRecord],
    min_labels: int = 3,
    threshold: int = 80,
    profiles: Mapping[str, VoterProfile] | None = None,
    excluded_voters: Iterable[str] = (),
) -> CuratedDataset:
    """Keep texts with >= min_labels votes and agreement strictly above threshold."""
    excluded = set(excluded_voters)
    profiles = profiles if profiles is not None else build_profiles(records)
    by_text: dict[str, list[LabelRecord]] = defaultdict(list)
    for r in records:
        if r.voter not in excluded:
            by_text[r.text].append(r)
    entries = []
    for text_id in sorted(by_text):
        recs = by_text[text_id]
        if len(recs) < min_labels:
            continue
        a = agreement([r.label for r in recs])
        if a.tie or a.percent <= threshold:
            continue
        ra = ReadingAbility.mean([profiles[r.voter].reading_ability for r in recs])
        entries.append(CuratedEntry(text_id, a.majority, a.percent, ra, len(recs)))
    return CuratedDataset(entries, min_labels, threshold)


@dataclass
class CurationResult:
    dataset: CuratedDataset
    profiles: dict[str, VoterProfile]
    flagged: set[str]
    report: dict


def run_curation(
    ingested: IngestResult,
    gold: GoldStandardSet | None = None,
    min_labels: int = 3,
    threshold: int = 80,
    z_threshold: float = 3.0,
    gold_floor: float = 1.0 / 3.0,
) -> CurationResult:
    records = ingested.records
    profiles = build_profiles(records, gold)
    notes = []
    try:
        flagged = detect_outliers(profiles, z_threshold, gold_floor)
    except TooFewVoters as exc:
        flagged = set()
        notes.append(f"outlier detection skipped: {exc}")
    for v in flagged:
        profiles[v].outlier_flag = True
    dataset = filter_curated(records, min_labels, threshold, profiles, flagged)
    texts = {r.text for r in records}
    by_text: dict[str, list[int]] = defaultdict(list)
    for r in records:
        if r.voter not in flagged:
            by_text[r.text].append(r.label)
    ties = sum(1 for labs in by_text.values() if agreement(labs).tie)
    report = {
        "log": log_statistics(records),
        "malformed_lines": [{"line": ln, "error": msg} for ln, msg in ingested.errors],
        "duplicates_dropped": ingested.duplicates,
        "flagged_voters": sorted(flagged),
        "voters": {
            v: {
                "reading_ability": list(p.reading_ability.as_tuple()),
                "gold_accuracy": p.gold_accuracy,
                "n_labels": p.n_labels,
                "outlier": p.outlier_flag,
            }
            for v, p in sorted(profiles.items())
        },
        "rules": {"min_labels": min_labels, "agreement_threshold": threshold, "z_threshold": z_threshold, "gold_floor": gold_floor},
        "texts_seen": len(texts),
        "texts_with_tie": ties,
        "texts_curated": len(dataset),
        "curated_label_counts": {LEVELS[i]: sum(1 for e in dataset.entries if e.label == i) for i in range(len(LEVELS))},
        "notes": notes,
    }
    return CurationResult(dataset, profiles, flagged, report)


def log_statistics(records: Sequence[LabelRecord], docs: Mapping[str, str] | None = None) -> dict:
    """Aggregate properties of a vote log (texts, voters, labels per text, label portions)."""
    n = len(records)
    texts = {r.text for r in records}
    voters = {r.voter for r in records}
    c = Counter(r.label for r in records)
    out = {
        "total_texts": len(texts),
        "total_voters": len(voters),
        "total_labels": n,
        "labels_per_text": n / len(texts) if texts else 0.0,
        "texts_per_voter": n / len(voters) if voters else 0.0,
        "label_portions": {LEVELS[i]: (c[i] / n if n else 0.0) for i in range(len(LEVELS))},
    }
    if docs:
        lengths = [build_document(RawDocument(t, docs[t])) for t in texts if t in docs]
        if lengths:
            out["avg_words"] = sum(d.n_words for d in lengths) / len(lengths)
            out["avg_characters"] = sum(d.char_count for d in lengths) / len(lengths)
    return out


def emit_dataset(curated: CuratedDataset, docs: Mapping[str, str], path: str | Path) -> tuple[int, list[str]]:
    """Write curated rows as JSONL sorted by text id; returns (rows written, missing ids)."""
    rows, missing = [], []
    for e in sorted(curated.entries, key=lambda e: e.text_id):
        if e.text_id not in docs:
            missing.append(e.text_id)
            log.warning("no document for curated text %s; row skipped", e.text_id)
            continue
        rows.append(
            json.dumps(
                {
                    "text_id": e.text_id,
                    "text": docs[e.text_id],
                    "label": LEVELS[e.label],
                    "agreement": e.agreement,
                    "reading_ability": list(e.reading_ability.as_tuple()),
                },
                ensure_ascii=False,
                sort_keys=True,
            )
        )
    atomic_write_text(path, "".join(r + "\n" for r in rows))
    return len(rows), missing


@dataclass(frozen=True)
class LabeledText:
    text_id: str
    text: str
    label: int
    agreement: int
    reading_ability: ReadingAbility


def load_labeled_dataset(path: str | Path) -> list[LabeledText]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                r = json.loads(line)
                out.append(
                    LabeledText(
                        r["text_id"], r["text"], LABEL_INDEX[r["label"]], int(r["agreement"]), ReadingAbility(*r["reading_ability"])
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParsreadError(f"{path}:{lineno}: bad dataset row ({exc})") from exc
    return out
