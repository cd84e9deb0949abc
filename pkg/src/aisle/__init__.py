"""Exact engine for compactly generated t-structures over commutative noetherian rings."""

__version__ = "0.1.0"
