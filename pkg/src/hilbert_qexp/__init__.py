"""Exact q-expansions of Hilbert modular forms over totally real fields."""

__version__ = "0.1.0"
