"""Exact arithmetic in Thompson's group F and a compiler from polynomial systems over
the non-negative integers to systems of equations over F."""

__version__ = "0.1.0"
