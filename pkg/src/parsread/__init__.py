"""Persian text readability assessment: formulas, n-gram features, classifiers, curation."""

__version__ = "0.1.0"
