"""Mutation of symmetric algebras through two-term and periodic tilting complexes."""

__version__ = "0.1.0"
