import random

import pytest

from parsread import formulas
from parsread.errors import DivisionDomain
from parsread.textcore import TextStatistics


def stats(**kw) -> TextStatistics:
    return TextStatistics(**kw)


@pytest.mark.parametrize(
    "kw, fn, expected",
    [
        (dict(letters=40, words=10, sentences=1), formulas.flesch_dayani, 249.351),
        (dict(letters=0, words=10, sentences=10), formulas.flesch_dayani, 261.825),
        (dict(words=100, sentences=10, syllables=150), formulas.flesch_kincaid_grade, 6.01),
        (dict(words=7, sentences=7, syllables=7), formulas.flesch_kincaid_grade, -3.4),
        (dict(words=100, sentences=10, complex_words=5), formulas.gunning_fog, 9.0),
        (dict(words=100, sentences=10, difficult_words=20), formulas.dale_chall, 3.654),
        (dict(words=9, sentences=9, difficult_words=9), formulas.dale_chall, 15.8396),
    ],
)
def test_spot_values(kw, fn, expected):
    assert fn(stats(**kw)) == pytest.approx(expected, abs=1e-9)


def test_classical_gunning_variant():
    s = stats(words=100, sentences=10, complex_words=5)
    assert formulas.gunning_fog(s, classical=True) == pytest.approx(0.4 * (10 + 5), abs=1e-12)
    assert formulas.score("gunning_fog", s, classical_gunning=True).value == pytest.approx(6.0)


def test_scores_are_not_clamped():
    s = stats(letters=10_000, words=10, sentences=1)
    assert formulas.flesch_dayani(s) < 0


@pytest.mark.parametrize("kw", [dict(words=0, sentences=1), dict(words=3, sentences=0)])
def test_division_domain(kw):
    for f in formulas.Formula:
        with pytest.raises(DivisionDomain):
            formulas.score(f, stats(**kw))


def test_monotone_in_sentence_length():
    rng = random.Random(3)
    for _ in range(200):
        w = rng.randint(1, 500)
        s1, s2 = rng.randint(1, 50), rng.randint(1, 50)
        if s1 == s2:
            continue
        short, long_ = (s1, s2) if s1 > s2 else (s2, s1)  # more sentences, shorter on average
        base = dict(letters=rng.randint(0, 3000), words=w, syllables=rng.randint(w, 3 * w),
                    complex_words=rng.randint(0, w), difficult_words=rng.randint(0, w))
        a, b = stats(sentences=short, **base), stats(sentences=long_, **base)
        assert formulas.flesch_dayani(a) > formulas.flesch_dayani(b)
        assert formulas.flesch_kincaid_grade(a) < formulas.flesch_kincaid_grade(b)
        assert formulas.gunning_fog(a) < formulas.gunning_fog(b)
        assert formulas.dale_chall(a) < formulas.dale_chall(b)
