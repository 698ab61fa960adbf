"""Regenerate the bundled toy corpora under src/parsread/data/toy/.

Documents are sampled from POS templates over three vocabulary tiers, so the
easy/medium/hard levels differ in sentence length, word length and word
rarity. The vote log simulates honest voters plus two unreliable ones.

    python scripts/make_toy_data.py [--seed N] [--out DIR]
"""

from __future__ import annotations

import argparse
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

ZWNJ = "\u200c"

VOCAB = {
    "easy": {
        "N": "خانه مادر پدر کتاب آب نان گربه سگ باغ گل درخت مدرسه دوست بچه روز شب ماه بازی توپ دست چشم راه شهر کوچه",
        "V": "رفت آمد خورد دید گفت خوابید نشست دوید خندید نوشت خواند دارد است بود",
        "ADJ": "بزرگ کوچک خوب زیبا سبز گرم سرد شاد تازه قرمز",
        "ADV": "امروز زود دیروز آرام تند اینجا",
        "PRO": "من تو او ما آنها",
        "P": "به از در با برای",
        "CONJ": "و اما که",
        "NUM": "یک دو سه",
    },
    "medium": {
        "N": "دانشگاه اقتصاد سفر تاریخ فرهنگ جامعه پژوهش کشور دولت رسانه فناوری ورزش مسابقه گزارش خبرنگار شرکت",
        "V": f"پرداخت رسید افزایش{ZWNJ}یافت کاهش{ZWNJ}یافت اعلام{ZWNJ}کرد بررسی{ZWNJ}کرد برگزار{ZWNJ}شد",
        "ADJ": f"اجتماعی فرهنگی اقتصادی مهم جدید بین{ZWNJ}المللی ملی",
        "ADV": "همچنین اخیرا سپس",
        "CONJ": "زیرا ولی",
        "NUM": "چهار پنج",
    },
    "hard": {
        "N": (
            f"استنباط مقتضیات معرفت{ZWNJ}شناسی هستی{ZWNJ}شناسی استدلال تجلی انتزاع پدیدارشناسی "
            f"تناقض ماهیت استعلا مشروعیت جهان{ZWNJ}بینی عقلانیت بنیان"
        ),
        "V": f"می{ZWNJ}انجامد می{ZWNJ}نماید مستلزم{ZWNJ}است تلقی{ZWNJ}می{ZWNJ}شود محسوب{ZWNJ}می{ZWNJ}گردد",
        "ADJ": "متعالی انتزاعی معرفتی استعلایی پیچیده بنیادین غایی متافیزیکی ذاتی",
        "ADV": f"بالضروره علی{ZWNJ}الخصوص متعاقبا اساسا",
        "CONJ": "لیکن چنانچه هرچند",
        "P": "درباب ازجمله",
    },
}
VOCAB = {tier: {t: ws.split() for t, ws in d.items()} for tier, d in VOCAB.items()}

TEMPLATES = {
    "easy": [
        "PRO N V", "N ADJ V", "PRO P N V", "N P N V", "ADV PRO N V", "NUM N ADJ V", "PRO N CONJ N V",
    ],
    "medium": [
        "N ADJ P N ADJ V", "N N ADJ CONJ N ADJ V", "ADV N P N ADJ V", "N ADJ P N N V",
        "PRO P N ADJ N V CONJ N ADJ V",
    ],
    "hard": [
        "N N ADJ CONJ N ADJ P N ADJ ADV V",
        "CONJ N ADJ P N N ADJ V N ADJ P N ADJ V",
        "N ADJ P N ADJ CONJ N ADJ N ADV V",
        "ADV N N ADJ P N ADJ ADJ CONJ N P N ADJ V",
    ],
}
# probability of drawing each word from the document's own tier
TIER_MIX = {"easy": {"easy": 1.0}, "medium": {"medium": 0.6, "easy": 0.4}, "hard": {"hard": 0.65, "medium": 0.2, "easy": 0.15}}
SENTENCES = {"easy": (3, 5), "medium": (2, 4), "hard": (1, 3)}
LEVELS = ("easy", "medium", "hard")


def pick_word(rng: random.Random, level: str, tag: str) -> str:
    mix = TIER_MIX[level]
    tiers = list(mix)
    tier = rng.choices(tiers, weights=[mix[t] for t in tiers])[0]
    pool = VOCAB[tier].get(tag) or VOCAB["easy"][tag]
    return rng.choice(pool)


def arabicize(rng: random.Random, word: str) -> str:
    # occasional Arabic-codepoint spellings exercise the normalizer
    if rng.random() < 0.05:
        return word.replace("\u06cc", "\u064a").replace("\u06a9", "\u0643")
    return word


def sentence(rng: random.Random, level: str) -> list[tuple[str, str]]:
    template = rng.choice(TEMPLATES[level]).split()
    return [(pick_word(rng, level, tag), tag) for tag in template]


def document(rng: random.Random, level: str) -> tuple[str, list[list[tuple[str, str]]]]:
    lo, hi = SENTENCES[level]
    sents = [sentence(rng, level) for _ in range(rng.randint(lo, hi))]
    terminators = [".", ".", "!", "؟"] if level == "easy" else ["."]
    text = " ".join(" ".join(arabicize(rng, w) for w, _ in s) + rng.choice(terminators) for s in sents)
    return text, sents


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20261015)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/parsread/data/toy"))
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    # language-model training corpus
    with open(out / "lm_corpus.jsonl", "w", encoding="utf-8") as fh:
        for i in range(400):
            level = rng.choices(LEVELS, weights=[5, 3, 2])[0]
            text, _ = document(rng, level)
            fh.write(json.dumps({"id": f"lm-{i:04d}", "text": text}, ensure_ascii=False) + "\n")

    # pre-tagged corpus
    with open(out / "tagged_corpus.txt", "w", encoding="utf-8") as fh:
        fh.write("# toy pre-tagged corpus: one sentence per line, word/TAG tokens\n")
        for i in range(300):
            level = LEVELS[i % 3]
            s = sentence(rng, level)
            fh.write(" ".join(f"{w}/{t}" for w, t in s) + "\n")
            if i % 20 == 19:
                fh.write("\n")

    # documents to be labeled
    counts = {"easy": 110, "medium": 66, "hard": 44}
    truth = {}
    with open(out / "docs.jsonl", "w", encoding="utf-8") as fh:
        ids = []
        for level, n in counts.items():
            for _ in range(n):
                ids.append(level)
        rng.shuffle(ids)
        for i, level in enumerate(ids):
            tid = f"t{i:04d}"
            text, _ = document(rng, level)
            truth[tid] = LEVELS.index(level)
            fh.write(json.dumps({"id": tid, "text": text}, ensure_ascii=False) + "\n")

    gold = []
    for lvl in range(3):
        gold += sorted(t for t, v in truth.items() if v == lvl)[:3]
    with open(out / "gold.jsonl", "w", encoding="utf-8") as fh:
        for t in gold:
            fh.write(json.dumps({"text": t, "label": LEVELS[truth[t]]}) + "\n")

    voters = [f"v{i:02d}" for i in range(30)]
    always_hard, random_voter = voters[-2], voters[-1]

    def vote(voter: str, level: int) -> int:
        if voter == always_hard:
            return 2
        if voter == random_voter:
            return rng.randrange(3)
        if rng.random() < 0.96:
            return level
        return rng.choice([l for l in (level - 1, level + 1) if 0 <= l <= 2])

    t0 = datetime(2019, 3, 1, tzinfo=timezone.utc)
    lines = []
    for tid in sorted(truth):
        k = rng.choices([3, 4, 5], weights=[6, 3, 1])[0]
        chosen = voters if tid in gold else rng.sample(voters, k)
        for v in chosen:
            ts = t0 + timedelta(minutes=rng.randrange(130_000))
            lines.append({"voter": v, "text": tid, "label": LEVELS[vote(v, truth[tid])], "ts": ts.isoformat()})
    rng.shuffle(lines)
    # one late duplicate vote and one malformed line exercise ingestion checks
    dup = dict(lines[0])
    dup["ts"] = (datetime.fromisoformat(dup["ts"]) + timedelta(days=1)).isoformat()
    dup["label"] = LEVELS[(LEVELS.index(dup["label"]) + 1) % 3]
    with open(out / "labels.jsonl", "w", encoding="utf-8") as fh:
        for rec in lines:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        fh.write(json.dumps(dup, ensure_ascii=False) + "\n")
        fh.write('{"voter": "v00", "text": "t0000", "label": "very hard", "ts": "2019-03-02T00:00:00+00:00"}\n')

    print(f"wrote toy data to {out}")


if __name__ == "__main__":
    main()
