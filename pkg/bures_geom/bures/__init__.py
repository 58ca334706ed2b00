"""Fidelity, Bures distance and the constructions built on optimal vectors."""
