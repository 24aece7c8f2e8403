"""Quadratic functors on pointed algebraic theories, computed exactly."""

__version__ = "0.1.0"
