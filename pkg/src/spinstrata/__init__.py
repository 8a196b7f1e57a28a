"""Combinatorial engine for prototype square-tiled surfaces, r-spin structures and Dehn twist words."""

__version__ = "0.1.0"
