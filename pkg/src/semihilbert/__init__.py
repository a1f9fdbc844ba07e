"""Finite-dimensional toolkit for semi-Hilbert space operator geometry."""

__version__ = "0.1.0"
