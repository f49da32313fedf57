"""Rational homology of matching complexes as symmetric group representations."""

__version__ = "0.1.0"
