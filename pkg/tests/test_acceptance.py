"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
repeated in the terminal summary under "acceptance criteria".
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from collections import Counter
from datetime import datetime
from pathlib import Path

import mpmath
import numpy as np

from parsread import classify, curate, evaluation, features, formulas, ngram, pos
from parsread.classify import ClassifierConfig, ClassifierModel, GnbModel
from parsread.curate import LabelRecord
from parsread.features import FeatureDataset, build_schema, fit_scaler, transform
from parsread.ngram import Unit
from parsread.textcore import TextStatistics, TokenizedDocument

from .conftest import ACCEPTANCE_LINES, TOY, run_pipeline
from .synthetic import one_vs_rest_separable, separable_blobs
from .test_curate import table2_log, votes_for
from .test_evaluation import fixed_matrices, hand_metrics

FIXTURE = Path(__file__).parent / "fixtures" / "schema_default.json"


def verdict(n: int, title: str, checks: dict[str, bool], detail: str = "") -> None:
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}"
    if detail:
        line += f"  [{detail}]"
    if failed:
        line += f"  failed: {', '.join(failed)}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


# --- 1. formulas -------------------------------------------------------------


def oracle_scores(L, W, S, Y, C, D):
    return (
        262.835 - 0.846 * L / W - 1.01 * W / S,
        0.39 * W / S + 11.8 * Y / W - 15.59,
        0.4 * W / S + 100 * C / W,
        15.79 * D / W + 0.0496 * W / S,
    )


def test_criterion_1_formula_oracle():
    rng = random.Random(1)
    cases = []
    for _ in range(10_000):
        w = rng.randint(1, 5000)
        cases.append(TextStatistics(
            letters=rng.randint(0, 12 * w), words=w, sentences=rng.randint(1, w),
            syllables=rng.randint(w, 4 * w), complex_words=rng.randint(0, w), difficult_words=rng.randint(0, w),
        ))
    t0 = time.perf_counter()
    got = [[f.value for f in formulas.all_scores(s)] for s in cases]
    elapsed = time.perf_counter() - t0
    worst = 0.0
    for s, g in zip(cases, got):
        want = oracle_scores(s.letters, s.words, s.sentences, s.syllables, s.complex_words, s.difficult_words)
        worst = max(worst, max(abs(a - b) for a, b in zip(g, want)))
    spots = (
        formulas.flesch_dayani(TextStatistics(letters=40, words=10, sentences=1)),
        formulas.gunning_fog(TextStatistics(words=100, sentences=10, complex_words=5)),
        formulas.dale_chall(TextStatistics(words=100, sentences=10, difficult_words=20)),
    )
    verdict(1, "formula oracle equivalence", {
        "max |diff| <= 1e-9": worst <= 1e-9,
        "runtime < 1 s": elapsed < 1.0,
        "spot values": all(abs(a - b) <= 1e-9 for a, b in zip(spots, (249.351, 9.0, 3.654))),
    }, f"max diff {worst:.2e}, {elapsed:.3f}s")


# --- 2. n-grams --------------------------------------------------------------


def enumerate_windows(corpus, unit, n):
    c = Counter()
    for d in corpus:
        seqs = [list(t) for s in d.sentences for t in s] if unit is Unit.CHAR else [list(s) for s in d.sentences]
        for seq in seqs:
            for i in range(len(seq) - n + 1):
                c[tuple(seq[i : i + n])] += 1
    return c


def random_corpus(rng: random.Random, vocab):
    budget = rng.randint(1, 1000)
    docs = []
    while budget > 0:
        sents = []
        for _ in range(rng.randint(1, 8)):
            k = min(budget, rng.randint(1, 25))
            budget -= k
            sents.append(tuple(rng.choice(vocab) for _ in range(k)))
            if budget <= 0:
                break
        docs.append(TokenizedDocument(f"d{len(docs)}", tuple(sents)))
    return docs


def test_criterion_2_ngram_exactness():
    rng = random.Random(2)
    words = ["خانه", "کتاب", "می\u200cروم", "آب", "a", "ab", "abc", "b"]
    tags = list(pos.DEFAULT_TAGS)
    exact = sums_ok = True
    worst = 0.0
    t0 = time.perf_counter()
    for i in range(100):
        unit = (Unit.WORD, Unit.CHAR, Unit.POS)[i % 3]
        corpus = random_corpus(rng, tags if unit is Unit.POS else words)
        for n in range(1, 6):
            brute = enumerate_windows(corpus, unit, n)
            if not brute:
                continue
            m = ngram.train(corpus, unit, n)
            exact &= m.counts == dict(brute) and m.total == sum(brute.values())
            err = abs(math.fsum(m.frequency(k) for k in m.counts) - 1.0)
            worst = max(worst, err)
            sums_ok &= err <= 1e-12
    elapsed = time.perf_counter() - t0
    verdict(2, "n-gram exactness", {
        "counts equal enumeration": exact,
        "sum of frequencies = 1 +- 1e-12": sums_ok,
        "runtime < 10 s": elapsed < 10.0,
    }, f"max sum error {worst:.1e}, {elapsed:.2f}s")


# --- 3. schema ---------------------------------------------------------------


def test_criterion_3_schema_coverage():
    frozen = json.loads(FIXTURE.read_text(encoding="utf-8"))
    schema = build_schema()
    tags = len(pos.DEFAULT_TAGSET)
    expected = 13 + 20 + 10 + tags + 10 + 3
    verdict(3, "feature schema coverage", {
        "every feature-list row present": set(features.TABLE_ROWS) <= {e.row for e in schema.entries},
        "dimension = 13+20+10+|TagSet|+10+3": schema.dim == expected,
        "matches frozen fixture": schema.names == [f["name"] for f in frozen["features"]] and frozen["dimension"] == schema.dim,
        "names unique": len(set(schema.names)) == schema.dim,
    }, f"D = {schema.dim} with |TagSet| = {tags}")


# --- 4. scaling --------------------------------------------------------------


def scaled_errors(X):
    sc = fit_scaler(X)
    Z = transform(sc, X)
    active = ~sc.passthrough
    mean_err = float(np.max(np.abs(Z.mean(axis=0)[active]), initial=0.0))
    std_err = float(np.max(np.abs(Z.std(axis=0)[active] - 1.0), initial=0.0))
    untouched = bool(np.array_equal(Z[:, ~active], X[:, ~active]))
    return mean_err, std_err, untouched


def test_criterion_4_scaling(toy_run):
    rng = np.random.default_rng(4)
    mats = [FeatureDataset.load(toy_run["features"]).X]
    for _ in range(50):
        n, d = int(rng.integers(2, 80)), int(rng.integers(1, 12))
        X = rng.normal(rng.uniform(-100, 100, d), rng.uniform(0.01, 50, d), (n, d))
        X[:, 0] = 3.0  # one constant column
        mats.append(X)
    errs = [scaled_errors(X) for X in mats]
    worst_mean = max(e[0] for e in errs)
    worst_std = max(e[1] for e in errs)
    verdict(4, "scaling correctness", {
        "mean 0 +- 1e-9": worst_mean <= 1e-9,
        "population std 1 +- 1e-9": worst_std <= 1e-9,
        "constant dimensions pass through": all(e[2] for e in errs),
    }, f"max |mean| {worst_mean:.1e}, max |std-1| {worst_std:.1e}")


# --- 5. classifiers ----------------------------------------------------------


def gnb_log_posteriors_mp(m: GnbModel, x):
    with mpmath.workdps(50):
        jll = []
        for c in range(len(m.priors)):
            acc = mpmath.log(mpmath.mpf(m.priors[c]))
            for j, xj in enumerate(x):
                var = mpmath.mpf(m.variances[c, j])
                diff = mpmath.mpf(xj) - mpmath.mpf(m.means[c, j])
                acc -= mpmath.log(2 * mpmath.pi * var) / 2 + diff * diff / (2 * var)
            jll.append(acc)
        z = mpmath.log(mpmath.fsum(mpmath.exp(v) for v in jll))
        return [float(v - z) for v in jll]


def consistent_dataset(rng, n, d):
    X = rng.integers(-4, 5, (n, d)).astype(np.float64)
    X = np.unique(X, axis=0)
    return X, rng.integers(0, 3, len(X))


def test_criterion_5_classifiers(toy_run):
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)

    gnb_worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 6))
        m = GnbModel(rng.dirichlet(np.ones(3)), rng.normal(0, 2, (3, d)), rng.uniform(0.2, 5.0, (3, d)))
        x = rng.normal(0, 3, d)
        gnb_worst = max(gnb_worst, float(np.max(np.abs(m.scores(x)[0] - gnb_log_posteriors_mp(m, x)))))

    tree_ok = True
    for _ in range(30):
        X, y = consistent_dataset(rng, int(rng.integers(5, 200)), int(rng.integers(1, 6)))
        tree_ok &= bool(np.all(classify.train_tree(X, y).predict(X) == y))
    toy = FeatureDataset.load(toy_run["features"])
    toy_tree = classify.train_tree(toy.X, toy.labels)
    tree_ok &= bool(np.all(toy_tree.predict(toy.X) == np.asarray(toy.labels)))

    X, y = separable_blobs(n_per_class=60, dim=5, sep=8.0, seed=0)
    separable = one_vs_rest_separable(X, y)
    rep = evaluation.cross_validate(ClassifierConfig("linear-svm", seed=0), X, y, k=10, seed=0)
    svm_f1 = rep.summary("test")["f1"]

    identical = True
    for kind in classify.KINDS:
        blobs = set()
        for _ in range(2):
            sc = fit_scaler(toy.X)
            est = classify.fit(ClassifierConfig(kind, seed=17, n_estimators=10), transform(sc, toy.X), toy.labels)
            blobs.add(classify.dumps(ClassifierModel(kind, est, toy.schema_names, sc)))
        identical &= len(blobs) == 1
    elapsed = time.perf_counter() - t0
    verdict(5, "classifier sanity", {
        "(a) GNB log-posteriors within 1e-9": gnb_worst <= 1e-9,
        "(b) unrestricted tree fits consistent data": tree_ok,
        "(c) fixture is linearly separable": separable,
        "(c) linear SVM 10-fold test F1 >= 0.95": svm_f1 >= 0.95,
        "(d) fixed seed gives identical model bytes": identical,
        "runtime < 60 s": elapsed < 60.0,
    }, f"GNB max diff {gnb_worst:.1e}, SVM F1 {svm_f1:.4f}, {elapsed:.1f}s")


# --- 6. metrics --------------------------------------------------------------


def test_criterion_6_metrics():
    worst = 0.0
    mats = fixed_matrices()
    for cm in mats:
        p, r, f, w = hand_metrics(cm.tolist())
        rep = evaluation.ClassReport.from_confusion(cm)
        got = [*rep.precision, *rep.recall, *rep.f1, *evaluation.weighted_metrics(rep)]
        want = [float(x) for x in (*p, *r, *f, *w)]
        worst = max(worst, max(abs(a - b) for a, b in zip(got, want)))
    auc = evaluation.binary_auc([0.9, 0.4, 0.6, 0.1], [True, True, False, False])
    rng = np.random.default_rng(6)
    invariant = True
    for _ in range(200):
        s = rng.integers(-20, 20, 30).astype(np.float64)
        lab = rng.random(30) < 0.4
        a, b = evaluation.binary_auc(s, lab), evaluation.binary_auc(5 * s**3 + 11, lab)
        invariant &= (math.isnan(a) and math.isnan(b)) or abs(a - b) <= 1e-12
    verdict(6, "metric correctness", {
        "20 confusion matrices within 1e-12": len(mats) == 20 and worst <= 1e-12,
        "AUC hand case = 0.75": auc == 0.75,
        "AUC rank invariance": invariant,
    }, f"max diff {worst:.1e}")


# --- 7. cross-validation hygiene ----------------------------------------------


def test_criterion_7_cv_hygiene():
    rng = np.random.default_rng(7)
    partition = balanced = stratified = True
    for _ in range(200):
        n, k = int(rng.integers(10, 300)), int(rng.integers(2, 11))
        y = rng.choice(3, n, p=[0.54, 0.32, 0.14])
        folds = evaluation.kfold_split(y, k, int(rng.integers(1000)))
        tests = [te for _, te in folds]
        partition &= sorted(np.concatenate(tests).tolist()) == list(range(n))
        partition &= all(not set(tr) & set(te) for tr, te in folds)
        sizes = [len(t) for t in tests]
        balanced &= max(sizes) - min(sizes) <= 1
        for c in range(3):
            per = [int(np.sum(y[t] == c)) for t in tests]
            stratified &= max(per) - min(per) <= 1
    X, y = separable_blobs(30, 4, seed=7)
    no_leak = True
    for tr, te in evaluation.kfold_split(y, 5, 0):
        base = evaluation.run_fold(ClassifierConfig("gnb"), X, y, tr, te)
        X2 = X.copy()
        X2[te] = rng.normal(0, 1e3, X2[te].shape)
        moved = evaluation.run_fold(ClassifierConfig("gnb"), X2, y, tr, te)
        no_leak &= np.array_equal(base.scaler.mean, moved.scaler.mean) and np.array_equal(base.scaler.std, moved.scaler.std)
    verdict(7, "cross-validation hygiene", {
        "disjoint and exhaustive": partition,
        "sizes within 1": balanced,
        "stratified": stratified,
        "test-fold perturbation leaves scaler unchanged": no_leak,
    })


# --- 8. curation -------------------------------------------------------------


def test_criterion_8_curation():
    agree = True
    n_sets = 0
    for size in (3, 4, 5):
        for ms in itertools.combinations_with_replacement(range(3), size):
            counts = [ms.count(c) for c in range(3)]
            top = max(counts)
            rule = counts.count(top) == 1 and (100 * top) // size > 80
            agree &= (len(curate.filter_curated(votes_for("t", list(ms)))) == 1) == rule
            n_sets += 1
    a = curate.agreement(["easy", "easy", "medium"])
    rejected_66 = a.percent == 66 and len(curate.filter_curated(votes_for("t", ["easy", "easy", "medium"]))) == 0
    rng = random.Random(8)
    sums = True
    for _ in range(500):
        recs = [LabelRecord("v", f"t{i}", rng.randrange(3), datetime(2020, 1, 1)) for i in range(rng.randint(1, 60))]
        sums &= abs(sum(curate.reading_ability(recs).as_tuple()) - 1.0) <= 1e-9
    stats = curate.log_statistics(table2_log())
    lpt = stats["labels_per_text"]
    verdict(8, "curation rules", {
        f"all {n_sets} multisets of size 3-5 match the rule": agree and n_sets == 46,
        "[easy,easy,medium] rejected at 66": rejected_66,
        "reading-ability triples sum to 1": sums,
        "labels per text 3.5 +- 0.1": abs(lpt - 3.5) <= 0.1,
    }, f"labels/text = {lpt:.4f} over {stats['total_texts']} texts")


# --- 9. end to end -----------------------------------------------------------


def snapshot(paths: dict[str, Path]) -> dict[str, bytes]:
    out = {}
    for name, p in paths.items():
        if p.is_dir():
            for f in sorted(p.iterdir()):
                out[f"{name}/{f.name}"] = f.read_bytes()
        else:
            out[name] = p.read_bytes()
    return out


def test_criterion_9_end_to_end(tmp_path):
    t0 = time.perf_counter()
    first = snapshot(run_pipeline(tmp_path))
    elapsed = time.perf_counter() - t0
    second = snapshot(run_pipeline(tmp_path))
    differing = sorted(k for k in first if first[k] != second.get(k))
    n_docs = sum(1 for _ in open(TOY / "docs.jsonl", encoding="utf-8"))
    verdict(9, "end-to-end determinism", {
        "completes in < 120 s": elapsed < 120.0,
        "byte-reproducible under fixed seed": not differing and first.keys() == second.keys(),
    }, f"{n_docs} documents, {len(first)} artifacts, {elapsed:.1f}s per run" + (f", differing: {differing}" if differing else ""))
