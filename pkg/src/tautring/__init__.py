"""Tautological classes of families of definite 4-manifolds, computed exactly."""

__version__ = "0.1.0"
