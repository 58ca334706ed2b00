"""Bures geometry on finite direct sums of full matrix algebras in Hilbert–Schmidt standard form."""

__version__ = "1.0.0"
