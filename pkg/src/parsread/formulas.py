"""Classical readability formulas over ``TextStatistics``.

Coefficients are used exactly as published for Persian assessment; scores are
never clamped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DivisionDomain
from .textcore import TextStatistics


class Formula(str, enum.Enum):
    FLESCH_DAYANI = "flesch_dayani"
    FLESCH_KINCAID = "flesch_kincaid"
    GUNNING_FOG = "gunning_fog"
    DALE_CHALL = "dale_chall"


@dataclass(frozen=True)
class FormulaScore:
    name: Formula
    value: float


def _ratios(s: TextStatistics) -> float:
    if s.words < 1:
        raise DivisionDomain("formula needs at least one word")
    if s.sentences < 1:
        raise DivisionDomain("formula needs at least one sentence")
    return s.words / s.sentences


def flesch_dayani(s: TextStatistics) -> float:
    wps = _ratios(s)
    return 262.835 - 0.846 * (s.letters / s.words) - 1.01 * wps


def flesch_kincaid_grade(s: TextStatistics) -> float:
    wps = _ratios(s)
    return 0.39 * wps + 11.8 * (s.syllables / s.words) - 15.59


def gunning_fog(s: TextStatistics, classical: bool = False) -> float:
    """Fog index with 0.4 on the sentence-length term only.

    ``classical=True`` applies 0.4 to the sum of both terms instead.
    """
    wps = _ratios(s)
    complex_pct = 100 * (s.complex_words / s.words)
    if classical:
        return 0.4 * (wps + complex_pct)
    return 0.4 * wps + complex_pct


def dale_chall(s: TextStatistics) -> float:
    wps = _ratios(s)
    return 15.79 * (s.difficult_words / s.words) + 0.0496 * wps


def score(name: Formula | str, s: TextStatistics, classical_gunning: bool = False) -> FormulaScore:
    name = Formula(name)
    if name is Formula.FLESCH_DAYANI:
        value = flesch_dayani(s)
    elif name is Formula.FLESCH_KINCAID:
        value = flesch_kincaid_grade(s)
    elif name is Formula.GUNNING_FOG:
        value = gunning_fog(s, classical_gunning)
    else:
        value = dale_chall(s)
    return FormulaScore(name, value)


def all_scores(s: TextStatistics, classical_gunning: bool = False) -> list[FormulaScore]:
    return [score(f, s, classical_gunning) for f in Formula]
