"""Randomized property suites and brute-force oracles."""
