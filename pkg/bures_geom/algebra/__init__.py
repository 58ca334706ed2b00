"""Finite direct sums of matrix blocks, their elements and positive forms."""
