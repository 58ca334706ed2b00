"""Dimension-truncation sweep."""
