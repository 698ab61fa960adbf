import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from parsread import features, pos
from parsread.errors import EmptyDocument, InsufficientData, MissingModel, SchemaMismatch
from parsread.features import DEFAULT_READING, FeatureVector, ReadingAbility, build_schema
from parsread.ngram import Unit
from parsread.textcore import RawDocument, build_document, load_corpus

from .conftest import TOY

FIXTURE = Path(__file__).parent / "fixtures" / "schema_default.json"


@pytest.fixture(scope="module")
def resources():
    tagger = pos.train_tagger(pos.load_tagged_corpus(TOY / "tagged_corpus.txt"))
    corpus = load_corpus(TOY / "lm_corpus.jsonl")[:80]
    return features.train_resources(corpus, tagger)


def sample_doc(text="مادر به خانه رفت. من کتاب خوب را در مدرسه خواندم! او آمد"):
    return build_document(RawDocument("s", text))


def test_schema_matches_frozen_fixture():
    frozen = json.loads(FIXTURE.read_text(encoding="utf-8"))
    schema = build_schema()
    assert schema.dim == frozen["dimension"]
    assert [e.name for e in schema.entries] == [f["name"] for f in frozen["features"]]
    assert [e.row for e in schema.entries] == [f["row"] for f in frozen["features"]]


def test_schema_covers_every_feature_row():
    schema = build_schema()
    assert {e.row for e in schema.entries} >= set(features.TABLE_ROWS)
    assert len(set(schema.names)) == schema.dim


@pytest.mark.parametrize("tags", [("A",), ("A", "B", "C"), pos.DEFAULT_TAGS])
def test_dimension_formula(tags):
    assert build_schema(pos.TagSet(tags)).dim == 13 + 20 + 10 + len(tags) + 10 + 3


def test_extract_shape_and_order(resources):
    v = features.extract(sample_doc(), resources)
    assert v.values.shape == (resources.schema.dim,)
    assert np.all(np.isfinite(v.values))
    d = v.as_dict()
    assert (d["reading_easy"], d["reading_medium"], d["reading_hard"]) == DEFAULT_READING.as_tuple()
    tag_pct = [d[f"pos_pct_{t}"] for t in pos.DEFAULT_TAGS]
    assert math.isclose(sum(tag_pct), 1.0, abs_tol=1e-12)
    assert d["entropy"] == d["n_unique_words"] / d["n_words"]
    for k in range(1, 5):
        assert d[f"unigram_max_mean_k{k}"] >= d[f"unigram_max_mean_k{k + 1}"] - 1e-15
        assert d[f"unigram_min_mean_k{k}"] <= d[f"unigram_min_mean_k{k + 1}"] + 1e-15


def test_reading_ability_is_passed_through(resources):
    ra = ReadingAbility(0.2, 0.3, 0.5)
    v = features.extract(sample_doc(), resources, ra).as_dict()
    assert (v["reading_easy"], v["reading_medium"], v["reading_hard"]) == (0.2, 0.3, 0.5)
    with pytest.raises(ValueError):
        ReadingAbility(0.5, 0.5, 0.5)


def test_stopword_only_document(resources):
    with pytest.raises(EmptyDocument):
        features.extract(sample_doc("از به در"), resources)


def test_missing_model_is_reported(resources):
    from dataclasses import replace

    broken = replace(resources, char_lms={n: m for n, m in resources.char_lms.items() if n != 3})
    with pytest.raises(MissingModel, match="char n=3"):
        features.extract(sample_doc(), broken)


def test_resources_round_trip(resources, tmp_path):
    features.save_resources(resources, tmp_path)
    assert sorted(p.name for p in tmp_path.glob("*.lm")) == sorted(
        features.lm_filename(u, n) for u in Unit for n in features.ORDERS
    )
    back = features.load_resources(tmp_path, resources.tagger)
    doc = sample_doc()
    assert np.array_equal(features.extract(doc, back).values, features.extract(doc, resources).values)
    (tmp_path / "pos-4.lm").unlink()
    with pytest.raises(MissingModel, match="pos-4.lm"):
        features.load_resources(tmp_path, resources.tagger)


def test_scaler_hand_example():
    X = np.array([[1.0], [2.0], [3.0]])
    sc = features.fit_scaler(X)
    assert sc.mean[0] == 2.0
    assert sc.std[0] == pytest.approx(math.sqrt(2 / 3), abs=1e-15)
    out = features.transform(sc, X)[:, 0]
    assert out == pytest.approx([-1.224744871391589, 0.0, 1.224744871391589], abs=1e-12)


def test_scaler_constant_column_passes_through():
    X = np.array([[1.0, 7.0], [3.0, 7.0]])
    sc = features.fit_scaler(X)
    assert sc.passthrough.tolist() == [False, True]
    assert features.transform(sc, X)[:, 1].tolist() == [7.0, 7.0]


def test_scaler_errors():
    with pytest.raises(InsufficientData):
        features.fit_scaler(np.ones((1, 3)))
    sc = features.fit_scaler(np.array([[1.0, 2.0], [2.0, 3.0]]))
    with pytest.raises(SchemaMismatch):
        features.transform(sc, np.ones(3))
    with pytest.raises(SchemaMismatch):
        FeatureVector(np.ones(3), build_schema())


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 6)),
              elements=st.floats(-1e6, 1e6, allow_nan=False)))
def test_scaled_training_set_is_standard(X):
    sc = features.fit_scaler(X)
    Z = features.transform(sc, X)
    active = ~sc.passthrough
    # tolerance relative to the column's spread keeps tiny-variance columns honest
    assert np.all(np.abs(Z.mean(axis=0)[active]) <= 1e-9 * np.maximum(1, np.abs(sc.mean[active]) / sc.std[active]))
    assert np.all(np.abs(Z.std(axis=0)[active] - 1) <= 1e-9 * np.maximum(1, np.abs(sc.mean[active]) / sc.std[active]))


def test_dataset_json_and_tsv(tmp_path, resources):
    schema = resources.schema
    docs = [sample_doc(), sample_doc("گربه در باغ خوابید. سگ دوید")]
    vecs = [features.extract(d, resources) for d in docs]
    ds = features.FeatureDataset(schema.names, ["a", "b"], [0, 2], np.vstack([v.values for v in vecs]), {"k": 1})
    ds.save(tmp_path / "f.json")
    back = features.FeatureDataset.load(tmp_path / "f.json")
    assert back.labels == [0, 2] and np.array_equal(back.X, ds.X) and back.meta == {"k": 1}

    labels_path = features.export_tsv(vecs, ["easy", "hard"], tmp_path / "v.tsv")
    header, M = features.read_tsv(tmp_path / "v.tsv")
    assert header == schema.names
    assert np.array_equal(M, ds.X)  # repr floats round-trip exactly
    assert labels_path.read_text(encoding="utf-8") == "easy\nhard\n"
    with pytest.raises(SchemaMismatch):
        features.export_tsv(vecs, ["easy"], tmp_path / "w.tsv")
