"""Finite simplicial sets: presentations, lifting problems, homotopy and factorizations."""

__version__ = "0.1.0"
