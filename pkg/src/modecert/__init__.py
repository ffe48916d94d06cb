"""Exact certificate engine for mode stability of the wave-maps blow-up."""

__version__ = "0.1.0"
