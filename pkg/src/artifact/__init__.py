"""Extensional resource calculus, truncated Taylor expansion, relational typing and games."""

__version__ = "0.1.0"
