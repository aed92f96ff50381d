"""Exhaustive search and exact certification of nuciferous Cayley graphs."""

__version__ = "0.1.0"
