"""Polysemy-aware controlled natural language toolkit."""

__version__ = "0.1.0"
