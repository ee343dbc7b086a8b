"""Weak norms of formation residuals in finite permutation groups."""

__version__ = "0.1.0"
