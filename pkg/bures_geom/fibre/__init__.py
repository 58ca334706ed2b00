"""Relative fibres and the extension criterion."""
