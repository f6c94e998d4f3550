"""Braid monodromy factorizations of degenerated surfaces and the groups they present."""

__version__ = "0.1.0"
