"""Exception hierarchy shared by every parsread module."""

from __future__ import annotations


class ParsreadError(Exception):
    """Base class; the CLI turns these into structured error messages."""


class EmptyDocument(ParsreadError):
    pass


class EmptyCorpus(ParsreadError):
    pass


class OrderMismatch(ParsreadError):
    pass


class VersionMismatch(ParsreadError):
    pass


class CorruptModel(ParsreadError):
    pass


class DivisionDomain(ParsreadError, ZeroDivisionError):
    pass


class MissingModel(ParsreadError):
    pass


class InsufficientData(ParsreadError):
    pass


class SchemaMismatch(ParsreadError):
    pass


class MissingClass(ParsreadError):
    pass


class DegenerateData(ParsreadError):
    pass


class TooFewExamples(ParsreadError):
    pass


class ZeroSupport(ParsreadError):
    pass


class NoLabels(ParsreadError):
    pass


class NoGoldOverlap(ParsreadError):
    pass


class TooFewVoters(ParsreadError):
    pass


class UnknownTag(ParsreadError):
    pass


class ConfigError(ParsreadError):
    """Raised with every validation problem found, not only the first."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
