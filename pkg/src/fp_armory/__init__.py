"""Floating-point self-defense toolkit."""

__version__ = "0.1.0"
