"""Command-line entry point: ``parsread <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, classify, curate, evaluation, features, formulas, ngram, pos, textcore
from .binio import atomic_write_text
from .config import PipelineConfig, load_config
from .errors import ConfigError, EmptyDocument, MissingModel, ParsreadError
from .features import LEVELS, FeatureDataset, ReadingAbility

log = logging.getLogger("parsread")


def _pick(flag, fallback):
    return fallback if flag is None else flag


def _require(value, what: str):
    if value is None:
        raise ConfigError([f"missing required setting: {what}"])
    return value


def _existing(path: str | Path, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise MissingModel(f"{what} not found: {p}")
    return p


def _stopwords(path: str | None) -> frozenset[str]:
    return textcore.load_wordlist(_existing(path, "stopword list")) if path else textcore.default_stopwords()


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# --- subcommands ---------------------------------------------------------------


def cmd_normalize(args, cfg: PipelineConfig) -> int:
    raw = sys.stdin.read() if args.file in (None, "-") else _existing(args.file, "input file").read_text(encoding="utf-8")
    _emit(textcore.normalize(raw) + "\n", args.out)
    return 0


def cmd_train_lm(args, cfg: PipelineConfig) -> int:
    corpus_path = _existing(_require(_pick(args.corpus, cfg.paths.corpus), "--corpus"), "corpus")
    docs = textcore.load_corpus(corpus_path)
    stop = _stopwords(_pick(args.stopwords, cfg.paths.stopwords))
    remove = cfg.features.remove_stopwords and not args.keep_stopwords
    tagger_path = _pick(args.tagger, cfg.paths.tagger)
    if args.all:
        tagger = pos.load(_existing(_require(tagger_path, "--tagger"), "tagger"))
        res = features.train_resources(docs, tagger, stop, remove, cfg.features.tag_before_stopwords)
        res.classical_gunning = cfg.features.classical_gunning
        features.save_resources(res, _require(args.out, "--out"))
        print(f"trained 15 language models on {len(docs)} documents into {args.out}")
        return 0
    unit = ngram.Unit(_require(args.unit, "--unit"))
    order = _require(args.order, "--order")
    if unit is ngram.Unit.POS:
        tagger = pos.load(_existing(_require(tagger_path, "--tagger"), "tagger"))
        src = docs if cfg.features.tag_before_stopwords else [textcore.remove_stopwords(d, stop) for d in docs]
        train_docs = [pos.substitute_pos(tagger.tag(d)) for d in src]
    else:
        train_docs = [textcore.remove_stopwords(d, stop) for d in docs] if remove else docs
    model = ngram.train(train_docs, unit, order)
    ngram.save(model, _require(args.out, "--out"))
    print(f"{unit.value} order-{order} model: {model.vocab_size} n-grams, total {model.total}")
    return 0


def cmd_train_tagger(args, cfg: PipelineConfig) -> int:
    path = _existing(_require(_pick(args.corpus, cfg.paths.tagged_corpus), "--corpus"), "tagged corpus")
    tagset_path = _pick(args.tagset, cfg.paths.tagset)
    tagset = pos.load_tagset(_existing(tagset_path, "tag set")) if tagset_path else pos.DEFAULT_TAGSET
    tagger = pos.train_tagger(pos.load_tagged_corpus(path), tagset)
    pos.save(tagger, _require(args.out, "--out"))
    print(f"tagger lexicon: {len(tagger.lexicon)} words, {len(tagset)} tags")
    return 0


def _doc_texts(path: str | Path) -> dict[str, str]:
    return {d.id: d.text for d in textcore.iter_corpus(_existing(path, "document collection"))}


def cmd_curate(args, cfg: PipelineConfig) -> int:
    cc = cfg.curate
    ingested = curate.ingest_file(_existing(_require(_pick(args.log, cfg.paths.log), "--log"), "label log"))
    gold_path = _pick(args.gold, cfg.paths.gold)
    gold = curate.GoldStandardSet.load(_existing(gold_path, "gold set")) if gold_path else None
    result = curate.run_curation(
        ingested,
        gold,
        _pick(args.min_labels, cc.min_labels),
        _pick(args.threshold, cc.threshold),
        _pick(args.z_threshold, cc.z_threshold),
        _pick(args.gold_floor, cc.gold_floor),
    )
    docs = _doc_texts(_require(_pick(args.docs, cfg.paths.docs), "--docs"))
    n_rows, missing = curate.emit_dataset(result.dataset, docs, _require(args.out, "--out"))
    result.report["missing_documents"] = missing
    result.report["rows_written"] = n_rows
    if args.report:
        atomic_write_text(args.report, json.dumps(result.report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    for ln, msg in ingested.errors:
        print(f"warning: label log line {ln}: {msg}", file=sys.stderr)
    for m in missing:
        print(f"warning: no document for curated text {m}", file=sys.stderr)
    print(f"curated {n_rows} texts from {result.report['texts_seen']}; flagged voters: {len(result.flagged)}")
    return 0


def _resources(lm_dir, tagger_path) -> features.FeatureResources:
    tagger = pos.load(_existing(_require(tagger_path, "--tagger"), "tagger"))
    return features.load_resources(_existing(_require(lm_dir, "--lm-dir"), "language-model directory"), tagger)


def cmd_extract_features(args, cfg: PipelineConfig) -> int:
    lm_dir = _pick(args.lm_dir, cfg.paths.lm_dir)
    tagger_path = _pick(args.tagger, cfg.paths.tagger)
    res = _resources(lm_dir, tagger_path)
    rows = curate.load_labeled_dataset(_existing(_require(args.dataset, "--dataset"), "labeled dataset"))
    ids, labels, vecs = [], [], []
    for r in sorted(rows, key=lambda r: r.text_id):
        try:
            doc = textcore.build_document(textcore.RawDocument(r.text_id, r.text))
            vecs.append(features.extract(doc, res, r.reading_ability).values)
        except EmptyDocument as exc:
            print(f"warning: skipped {r.text_id}: {exc}", file=sys.stderr)
            continue
        ids.append(r.text_id)
        labels.append(r.label)
    X = np.vstack(vecs) if vecs else np.empty((0, res.schema.dim))
    meta = {"lm_dir": str(Path(lm_dir).resolve()), "tagger": str(Path(tagger_path).resolve())}
    FeatureDataset(res.schema.names, ids, labels, X, meta).save(_require(args.out, "--out"))
    print(f"extracted {len(ids)} x {res.schema.dim} features")
    return 0


def _classifier_config(args, cfg: PipelineConfig) -> classify.ClassifierConfig:
    c = cfg.classifier
    return classify.ClassifierConfig(
        kind=_pick(args.classifier, c.kind),
        seed=_pick(args.seed, cfg.seed),
        lam=_pick(args.lam, c.lam),
        epochs=_pick(args.epochs, c.epochs),
        var_floor=c.var_floor,
        max_depth=_pick(args.max_depth, c.max_depth),
        min_leaf=c.min_leaf,
        n_estimators=_pick(args.n_estimators, c.n_estimators),
        max_features=c.max_features,
        bootstrap=c.bootstrap,
    )


def _load_features(path) -> FeatureDataset:
    return FeatureDataset.load(_existing(_require(path, "--data"), "feature dataset"))


def cmd_train(args, cfg: PipelineConfig) -> int:
    ccfg = _classifier_config(args, cfg)
    data = _load_features(args.data)
    scaler = features.fit_scaler(data.X)
    est = classify.fit(ccfg, features.transform(scaler, data.X), data.labels)
    meta = dict(data.meta)
    meta["config"] = ccfg.to_dict()
    meta["n_train"] = len(data)
    model = classify.ClassifierModel(ccfg.kind, est, data.schema_names, scaler, meta)
    classify.save_model(model, _require(args.out, "--out"))
    train_acc = float(np.mean(model.predict(data.X) == np.asarray(data.labels)))
    print(f"trained {ccfg.kind} on {len(data)} examples; training accuracy {train_acc:.4f}")
    return 0


def cmd_evaluate(args, cfg: PipelineConfig) -> int:
    ccfg = _classifier_config(args, cfg)
    data = _load_features(args.data)
    k = _pick(args.k, cfg.evaluate.k)
    stratify = cfg.evaluate.stratify and not args.no_stratify
    report = evaluation.cross_validate(ccfg, data.X, data.labels, k, ccfg.seed, stratify)
    if args.out:
        atomic_write_text(args.out, report.to_json())
    sys.stdout.write(report.render())
    return 0


def _reading(values) -> ReadingAbility:
    return features.DEFAULT_READING if values is None else ReadingAbility(*values)


def cmd_assess(args, cfg: PipelineConfig) -> int:
    text = _existing(args.file, "input file").read_text(encoding="utf-8")
    doc = textcore.build_document(textcore.RawDocument(Path(args.file).stem, text))
    if args.formula:
        lm_dir = _pick(args.lm_dir, cfg.paths.lm_dir)
        lists = textcore.WordLists()
        stop = frozenset()
        remove = False
        if lm_dir:
            d = _existing(lm_dir, "language-model directory")
            lists = textcore.WordLists(textcore.load_wordlist(d / "complex.txt"), textcore.load_wordlist(d / "familiar.txt"))
            stop = _stopwords(str(d / "stopwords.txt") if (d / "stopwords.txt").exists() else None)
            remove = cfg.features.remove_stopwords
        work = textcore.remove_stopwords(doc, stop) if remove else doc
        stats = textcore.compute_statistics(work, lists.complex, lists.familiar)
        value = formulas.score(args.formula, stats, cfg.features.classical_gunning).value
        print(f"{value:.4f}")
        return 0
    model_path = _require(_pick(args.model, cfg.paths.model), "--model or --formula")
    model = classify.load_model(_existing(model_path, "classifier model"))
    lm_dir = _pick(args.lm_dir, cfg.paths.lm_dir) or model.meta.get("lm_dir")
    tagger_path = _pick(args.tagger, cfg.paths.tagger) or model.meta.get("tagger")
    res = _resources(lm_dir, tagger_path)
    if res.schema.names != model.schema:
        raise ParsreadError("feature schema of the language-model resources does not match the model")
    vec = features.extract(doc, res, _reading(args.reading))
    scores = model.scores(vec.values)[0]
    label = int(np.argmax(scores))
    print(LEVELS[label])
    for name, s in zip(LEVELS, scores):
        print(f"{name}\t{s:.4f}")
    return 0


def cmd_schema(args, cfg: PipelineConfig) -> int:
    tagset_path = _pick(args.tagset, cfg.paths.tagset)
    tagset = pos.load_tagset(_existing(tagset_path, "tag set")) if tagset_path else pos.DEFAULT_TAGSET
    schema = features.build_schema(tagset)
    if args.format == "json":
        text = json.dumps({"dimension": schema.dim, "features": schema.to_rows()}, indent=2, ensure_ascii=False) + "\n"
    else:
        lines = ["index\tname\tsource\trow"]
        lines += [f"{r['index']}\t{r['name']}\t{r['source']}\t{r['row']}" for r in schema.to_rows()]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_export_features(args, cfg: PipelineConfig) -> int:
    data = _load_features(args.data)
    schema = features.FeatureSchema(tuple(features.FeatureEntry(n, "", "") for n in data.schema_names))
    labels_path = features.export_tsv(list(data.X), [LEVELS[l] for l in data.labels], _require(args.out, "--out"), schema, args.labels)
    print(f"wrote {len(data)} vectors to {args.out} and labels to {labels_path}")
    return 0


# --- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    versions = (
        f"parsread {__version__} (lm format {ngram.FORMAT_VERSION}, tagger format {pos.FORMAT_VERSION}, "
        f"model format {classify.model_io.FORMAT_VERSION})"
    )
    p = argparse.ArgumentParser(prog="parsread", description="Persian text readability toolkit.")
    p.add_argument("--version", action="version", version=versions)
    p.add_argument("--config", metavar="FILE", help="TOML pipeline config; flags override it")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", required=True)

    s = sub.add_parser("normalize", help="print the normalized form of a text")
    s.add_argument("file", nargs="?", metavar="FILE", help="input text file, or - for stdin")
    s.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("train-lm", help="train an n-gram model, or all fifteen with --all")
    s.add_argument("--unit", choices=[u.value for u in ngram.Unit], help="n-gram unit")
    s.add_argument("--order", type=int, choices=range(1, 6), metavar="N", help="n-gram order, 1 to 5")
    s.add_argument("--corpus", metavar="PATH", help="directory of .txt files or a JSONL corpus")
    s.add_argument("--out", metavar="PATH", help="model file (directory with --all)")
    s.add_argument("--tagger", metavar="FILE", help="tagger model (needed for --unit pos and --all)")
    s.add_argument("--stopwords", metavar="FILE", help="stopword list (default: bundled Persian list)")
    s.add_argument("--keep-stopwords", action="store_true", help="do not remove stopwords before counting")
    s.add_argument("--all", action="store_true", help="train word/char/pos models n=1..5 plus word lists")
    s.set_defaults(func=cmd_train_lm)

    s = sub.add_parser("train-tagger", help="train the lexicon tagger on a word/TAG corpus")
    s.add_argument("--corpus", metavar="FILE", help="pre-tagged corpus, one sentence per line")
    s.add_argument("--tagset", metavar="FILE", help="tag set file, one tag per line")
    s.add_argument("--out", metavar="FILE", help="tagger model file")
    s.set_defaults(func=cmd_train_tagger)

    s = sub.add_parser("curate", help="build a curated labeled dataset from a vote log")
    s.add_argument("--log", metavar="FILE", help="label log JSONL")
    s.add_argument("--gold", metavar="FILE", help="gold-standard set JSONL")
    s.add_argument("--docs", metavar="PATH", help="documents: directory of .txt files or JSONL")
    s.add_argument("--out", metavar="FILE", help="curated dataset JSONL")
    s.add_argument("--report", metavar="FILE", help="curation report JSON")
    s.add_argument("--min-labels", type=int, metavar="N", help="minimum votes per text (default 3)")
    s.add_argument("--threshold", type=int, metavar="PCT", help="agreement must exceed this percent (default 80)")
    s.add_argument("--z-threshold", type=float, metavar="Z", help="outlier z-score threshold (default 3.0)")
    s.add_argument("--gold-floor", type=float, metavar="ACC", help="minimum gold accuracy (default 1/3)")
    s.set_defaults(func=cmd_curate)

    s = sub.add_parser("extract-features", help="compute feature vectors for a curated dataset")
    s.add_argument("--dataset", metavar="FILE", help="curated dataset JSONL")
    s.add_argument("--lm-dir", metavar="DIR", help="directory written by train-lm --all")
    s.add_argument("--tagger", metavar="FILE", help="tagger model")
    s.add_argument("--out", metavar="FILE", help="feature dataset JSON")
    s.set_defaults(func=cmd_extract_features)

    def classifier_flags(s):
        s.add_argument("--classifier", choices=classify.KINDS, help="classifier kind")
        s.add_argument("--data", metavar="FILE", help="feature dataset JSON")
        s.add_argument("--seed", type=int, metavar="N", help="random seed")
        s.add_argument("--lam", type=float, metavar="X", help="SVM L2 regularization (default 1e-4)")
        s.add_argument("--epochs", type=int, metavar="N", help="SVM epochs (default 100)")
        s.add_argument("--max-depth", type=int, metavar="N", help="tree depth limit (default unrestricted)")
        s.add_argument("--n-estimators", type=int, metavar="N", help="forest size (default 50)")

    s = sub.add_parser("train", help="train a classifier on a feature dataset")
    classifier_flags(s)
    s.add_argument("--out", metavar="FILE", help="classifier model file")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("evaluate", help="k-fold cross-validation report")
    classifier_flags(s)
    s.add_argument("--k", type=int, metavar="N", help="number of folds (default 10)")
    s.add_argument("--no-stratify", action="store_true", help="plain instead of stratified folds")
    s.add_argument("--out", metavar="FILE", help="report JSON")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("assess", help="score one text with a formula or a trained model")
    s.add_argument("file", metavar="FILE", help="text file to assess")
    s.add_argument("--model", metavar="FILE", help="classifier model file")
    s.add_argument("--formula", choices=[f.value for f in formulas.Formula], help="readability formula")
    s.add_argument("--lm-dir", metavar="DIR", help="language-model directory (default: recorded in the model)")
    s.add_argument("--tagger", metavar="FILE", help="tagger model (default: recorded in the model)")
    s.add_argument("--reading", type=float, nargs=3, metavar=("EASY", "MEDIUM", "HARD"), help="reader ability fractions")
    s.set_defaults(func=cmd_assess)

    s = sub.add_parser("schema", help="print the feature schema")
    s.add_argument("--tagset", metavar="FILE", help="tag set file")
    s.add_argument("--format", choices=("tsv", "json"), default="tsv", help="output format")
    s.add_argument("--out", metavar="FILE", help="write to FILE instead of stdout")
    s.set_defaults(func=cmd_schema)

    s = sub.add_parser("export-features", help="write projector-style vector and label TSVs")
    s.add_argument("--data", metavar="FILE", help="feature dataset JSON")
    s.add_argument("--out", metavar="FILE", help="vector TSV")
    s.add_argument("--labels", metavar="FILE", help="label TSV (default: next to --out)")
    s.set_defaults(func=cmd_export_features)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except ConfigError as exc:
        err = {"error": "ConfigError", "problems": exc.problems}
    except ParsreadError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
    except (OSError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(err, ensure_ascii=False), file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
