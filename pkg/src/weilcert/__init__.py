"""Certified explicit-formula bounds, torsion class masses and Siegel dimension tables."""

__version__ = "0.1.0"
