"""Spanning trees, rooted forests and regularised determinants on lattices."""

__version__ = "0.1.0"
