"""Hilbert–Schmidt standard form, modular data and overlap forms."""
