from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from parsread.cli import main

TOY = Path(str(resources.files("parsread").joinpath("data/toy")))


def run_pipeline(workdir: Path, classifier: str = "linear-svm", seed: int = 0) -> dict[str, Path]:
    """Run the whole command-line pipeline on the toy corpus inside ``workdir``."""
    p = {
        "normalized": workdir / "normalized.txt",
        "tagger": workdir / "tagger.bin",
        "lm": workdir / "lm",
        "curated": workdir / "curated.jsonl",
        "report": workdir / "curation.json",
        "features": workdir / "features.json",
        "model": workdir / "model.bin",
        "eval": workdir / "eval.json",
    }
    first_doc = workdir / "doc.txt"
    first_doc.write_text("كيف ١٢ كتاب\u200c\u200cها.\n", encoding="utf-8")
    steps = [
        ["normalize", str(first_doc), "--out", str(p["normalized"])],
        ["train-tagger", "--corpus", str(TOY / "tagged_corpus.txt"), "--out", str(p["tagger"])],
        ["train-lm", "--all", "--corpus", str(TOY / "lm_corpus.jsonl"), "--tagger", str(p["tagger"]), "--out", str(p["lm"])],
        [
            "curate", "--log", str(TOY / "labels.jsonl"), "--gold", str(TOY / "gold.jsonl"),
            "--docs", str(TOY / "docs.jsonl"), "--out", str(p["curated"]), "--report", str(p["report"]),
        ],
        ["extract-features", "--dataset", str(p["curated"]), "--lm-dir", str(p["lm"]), "--tagger", str(p["tagger"]), "--out", str(p["features"])],
        ["train", "--classifier", classifier, "--data", str(p["features"]), "--seed", str(seed), "--out", str(p["model"])],
        ["evaluate", "--classifier", classifier, "--data", str(p["features"]), "--seed", str(seed), "--out", str(p["eval"])],
    ]
    for argv in steps:
        code = main(argv)
        assert code == 0, f"step failed: {argv}"
    return p


@pytest.fixture(scope="session")
def toy_run(tmp_path_factory) -> dict[str, Path]:
    return run_pipeline(tmp_path_factory.mktemp("pipeline"))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
